"""Generators and independent oracles shared by the test modules.

Nothing here calls into the code paths it is used to check.
"""

import math
import random

import numpy as np

VOCAB = [f"w{i}" for i in range(5000)]


def node_names(n):
    return [f"n{i:02d}" for i in range(n)]


def random_edges(rng, nodes, p):
    return [(u, v) for u in nodes for v in nodes if u != v and rng.random() < p]


def random_dangling_free_edges(rng, nodes, max_out=5):
    edges = []
    for u in nodes:
        others = [v for v in nodes if v != u]
        k = rng.randint(1, min(max_out, len(others)))
        edges += [(u, v) for v in rng.sample(others, k)]
    return edges


def brute_pagerank(nodes, edges, d=0.85, sweeps=1000, variant="literal"):
    """Plain dictionary power iteration of the PageRank update."""
    out = {u: set() for u in nodes}
    for u, v in edges:
        if u != v:
            out[u].add(v)
    n = len(nodes)
    pr = {u: (1.0 if variant == "literal" else 1.0 / n) for u in nodes}
    for _ in range(sweeps):
        nxt = {}
        dangling = sum(pr[u] for u in nodes if not out[u]) if variant == "normalized" else 0.0
        for a in nodes:
            inflow = sum(pr[t] / len(out[t]) for t in nodes if a in out[t])
            if variant == "literal":
                nxt[a] = (1 - d) + d * inflow
            else:
                nxt[a] = (1 - d) / n + d * (inflow + dangling / n)
        pr = nxt
    return pr


def adjacency(nodes, edges):
    pos = {u: i for i, u in enumerate(nodes)}
    a = np.zeros((len(nodes), len(nodes)))
    for u, v in edges:
        if u != v:
            a[pos[u], pos[v]] = 1.0
    return a


def principal_authority(nodes, edges, max_steps=200_000):
    """Power method on A^T A started from A^T 1 (all hubs equal to one),
    run until the direction stops moving."""
    a = adjacency(nodes, edges)
    m = a.T @ a
    x = a.T @ np.ones(len(nodes))
    x /= np.linalg.norm(x)
    for _ in range(max_steps):
        y = m @ x
        y /= np.linalg.norm(y)
        if np.abs(y - x).max() < 1e-15:
            return y
        x = y
    return x


def cosine(u, v):
    return float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))


def raw_jaccard(tokens_a, tokens_b, w):
    """Jaccard ratio of w-gram tuple sets, computed without fingerprints."""
    sa = {tuple(tokens_a[i : i + w]) for i in range(len(tokens_a) - w + 1)}
    sb = {tuple(tokens_b[i : i + w]) for i in range(len(tokens_b) - w + 1)}
    return len(sa & sb) / len(sa | sb)


def planted_duplicate_corpus(seed=0, singles=40, pairs=5, length=100):
    """Return (records, planted) where each planted pair shares 90% of its tokens.

    The variant replaces one contiguous 10% block of the original.
    """
    rng = random.Random(seed)
    records = []
    planted = []
    for i in range(singles):
        records.append((f"s{i:02d}", [rng.choice(VOCAB) for _ in range(length)]))
    block = length // 10
    for i in range(pairs):
        base = [rng.choice(VOCAB) for _ in range(length)]
        start = rng.randrange(length - block + 1)
        variant = list(base)
        variant[start : start + block] = [rng.choice(VOCAB) for _ in range(block)]
        records.append((f"p{i}a", base))
        records.append((f"p{i}b", variant))
        planted.append((f"p{i}a", f"p{i}b"))
    return records, planted


def synthetic_corpus_text(n=100, seed=1, links=4, length=60, topics=10):
    """A linked corpus file body with ``topics`` planted vocabulary clusters."""
    rng = random.Random(seed)
    ids = [f"d{i:03d}" for i in range(n)]
    lines = ["# synthetic fixture corpus"]
    for i, doc in enumerate(ids):
        topic = i % topics
        words = [rng.choice(VOCAB[:400]) for _ in range(length)]
        words += [f"topic{topic}"] * rng.randint(1, 5)
        rng.shuffle(words)
        targets = rng.sample(ids, rng.randint(0, links))
        if rng.random() < 0.1:
            targets.append("missing-page")
        text = " ".join(w.upper() if rng.random() < 0.1 else w for w in words) + "."
        lines.append(f"{doc}\thttp://example.test/{doc}\t{','.join(targets)}\t{text}")
    return "\n".join(lines) + "\n"


def worked_example_fixture():
    """Run/qrels text for the 10-result judgment pattern with 162 known relevant."""
    pattern = [1, 1, 1, 1, 1, 1, 0, 0, 1, 1]
    run_lines = []
    qrels_lines = []
    for rank, rel in enumerate(pattern, start=1):
        doc = f"r{rank:02d}"
        run_lines.append(f"1 Q0 {doc} {rank} {100 - rank} worked")
        qrels_lines.append(f"1 0 {doc} {rel}")
    # remaining known relevant documents never retrieved
    for i in range(162 - sum(pattern)):
        qrels_lines.append(f"1 0 unretrieved{i:03d} 1")
    return "\n".join(run_lines) + "\n", "\n".join(qrels_lines) + "\n"


def bfs_oracle(links, seeds, max_depth, max_docs):
    """Independent BFS: level by level expansion, truncated to max_docs."""
    order = []
    seen = set()
    level = []
    for s in seeds:
        if s not in seen:
            seen.add(s)
            level.append(s)
    depth = 0
    while level:
        nxt = []
        for u in level:
            order.append(u)
            if depth < max_depth:
                for v in links[u]:
                    if v in links and v not in seen:
                        seen.add(v)
                        nxt.append(v)
        level = nxt
        depth += 1
    return order[:max_docs]


def isclose_all(a, b, tol):
    return all(math.isclose(a[k], b[k], rel_tol=0, abs_tol=tol) for k in a)


def synthetic_queries(topics=10):
    return "".join(f"{i + 1}\ttopic{i} w5\n" for i in range(topics))


def synthetic_qrels(n=100, topics=10):
    """Documents of cluster i are relevant (grade 1 or 2) to topic i+1."""
    lines = []
    for i in range(n):
        t = i % topics
        lines.append(f"{t + 1} 0 d{i:03d} {1 + (i // topics) % 2}")
    return "\n".join(lines) + "\n"


def matrix_pagerank(nodes, edges, d=0.85, sweeps=1000, variant="literal"):
    """Dense-matrix power iteration; independent of the sparse kernels."""
    n = len(nodes)
    a = adjacency(nodes, edges)
    outdeg = a.sum(axis=1)
    safe = np.where(outdeg > 0, outdeg, 1.0)
    transfer = (a / safe[:, None]).T  # transfer[i, j] = 1/C(j) if j -> i
    dangling = outdeg == 0
    if variant == "literal":
        x = np.ones(n)
        for _ in range(sweeps):
            x = (1 - d) + d * (transfer @ x)
    else:
        x = np.full(n, 1.0 / n)
        for _ in range(sweeps):
            x = (1 - d) / n + d * (transfer @ x + x[dangling].sum() / n)
    return dict(zip(nodes, x))
