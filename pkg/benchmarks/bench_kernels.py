"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--nodes 5000] [--repeat 5]
"""

import argparse
import random
import timeit
from array import array

from webir import kernels
from webir.webgraph import WebGraph


def make_graph(n, avg_degree, seed):
    rng = random.Random(seed)
    nodes = [f"n{i:06d}" for i in range(n)]
    edges = [(nodes[i], nodes[rng.randrange(n)]) for i in range(n) for _ in range(avg_degree)]
    return WebGraph.from_edges(edges, nodes=nodes)


def cases(args):
    g = make_graph(args.nodes, args.degree, args.seed)
    n = len(g)
    _, in_ptr, in_idx, out_ptr, out_idx = g.csr()
    outdeg = array("q", (out_ptr[i + 1] - out_ptr[i] for i in range(n)))
    dangling = array("q", (i for i in range(n) if outdeg[i] == 0))
    vec = lambda: array("d", [1.0]) * n  # noqa: E731
    rng = random.Random(args.seed)
    tokens = [rng.choice(("alpha", "beta", "gamma", "delta", "web", "link")).encode() for _ in range(args.tokens)]
    a = array("Q", sorted(rng.sample(range(1 << 40), args.tokens)))
    b = array("Q", sorted(set(a[::2]) | set(rng.sample(range(1 << 40), args.tokens // 2))))
    old, new, ha, hh, na, nh = vec(), vec(), vec(), vec(), vec(), vec()
    return {
        "pagerank_sweep": lambda k: k.pagerank_sweep(in_ptr, in_idx, outdeg, dangling, old, new, 0.85, 0.15 / n, True),
        "hits_sweep": lambda k: k.hits_sweep(in_ptr, in_idx, out_ptr, out_idx, ha, hh, na, nh),
        "fingerprint_windows": lambda k: k.fingerprint_windows(tokens, 4),
        "intersect_count": lambda k: k.intersect_count(a, b),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=5000)
    parser.add_argument("--degree", type=int, default=8)
    parser.add_argument("--tokens", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    try:
        compiled = kernels.backend("compiled")
    except ImportError:
        compiled = None
    python = kernels.backend("python")

    print(f"{'kernel':<22}{'python ms':>12}{'compiled ms':>14}{'speedup':>10}")
    for name, fn in cases(args).items():
        t_py = min(timeit.repeat(lambda: fn(python), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:<22}{t_py:>12.3f}{'n/a':>14}{'':>10}")
            continue
        t_c = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<22}{t_py:>12.3f}{t_c:>14.3f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
