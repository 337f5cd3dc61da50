"""Command-line pipeline: ``webir {ingest,rank,dedup,search,eval,pool}``.

Artifacts are plain text files in the ``--out`` directory. Exit status is 0
on success, 1 for usage or configuration errors, 2 for data, format or I/O
errors and 3 when an iteration did not converge (outputs are still
written). A JSON ``--config`` file may supply any flag by its long name
with dashes replaced by underscores; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import dedup, evaluation, index, ranking
from .corpus import CrawlPolicy, corpus_from_snapshot, ingest, read_corpus_files
from .errors import ConfigError, WebIRError
from .webgraph import parse_edges

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NONCONVERGED = 0, 1, 2, 3

CORPUS_FILE = "corpus.tsv"
GRAPH_FILE = "graph.tsv"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--out", default="out", help="artifact directory (default: out)")
    p.add_argument("--jobs", type=int, default=1, help="worker threads; outputs do not depend on it")


def _pagerank_flags(p):
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--variant", choices=ranking.VARIANTS, default="literal")
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--max-iterations", type=int, default=200)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="webir", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file of default flag values")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    parser.subcommands = sub.choices

    p = sub.add_parser("ingest", help="crawl a local corpus file into a snapshot and edge list")
    _common(p)
    p.add_argument("--corpus", nargs="+")
    p.add_argument("--seeds", help="comma-separated seed doc_ids (default: every document)")
    p.add_argument("--max-depth", type=int, default=CrawlPolicy.max_depth)
    p.add_argument("--max-docs", type=int, default=CrawlPolicy.max_docs)

    p = sub.add_parser("rank", help="PageRank or query-specific HITS scores")
    _common(p)
    p.add_argument("--algorithm", choices=("pagerank", "hits"), default="pagerank")
    _pagerank_flags(p)
    p.add_argument("--query")
    p.add_argument("--root-size", type=int, default=200)
    p.add_argument("--expand", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--hits-tolerance", type=float, default=1e-12)
    p.add_argument("--hits-max-iterations", type=int, default=ranking.HitsParams.max_iterations)

    p = sub.add_parser("dedup", help="report near-duplicate document pairs")
    _common(p)
    p.add_argument("--w", type=int, default=dedup.DEFAULT_W)
    p.add_argument("--threshold", type=float, default=dedup.DEFAULT_THRESHOLD)

    p = sub.add_parser("search", help="answer queries and write a TREC run file")
    _common(p)
    _pagerank_flags(p)
    p.add_argument("--query", help="a single query (with --topic)")
    p.add_argument("--topic", default="1")
    p.add_argument("--queries", help="file of 'topic<TAB>query' lines")
    p.add_argument("--alpha", type=float, default=index.DEFAULT_ALPHA)
    p.add_argument("--limit", type=int, default=1000)
    p.add_argument("--tag", default="webir")
    p.add_argument("--run-file", default="run.txt", help="output name inside --out")

    p = sub.add_parser("eval", help="score a run against qrels; emit curves")
    _common(p)
    p.add_argument("--run")
    p.add_argument("--qrels")
    p.add_argument("--measures", default="precision@10,recall@10,dcg@10")
    p.add_argument("--gain", choices=("linear", "exponential"), default="exponential")
    p.add_argument("--discount", choices=("log2", "log2max", "constant"), default="log2")
    p.add_argument("--grade-scale", type=int, help="highest grade (default: largest in qrels)")

    p = sub.add_parser("pool", help="pool the top-N of several runs into a judging worksheet")
    _common(p)
    p.add_argument("--runs", nargs="+")
    p.add_argument("--pool-depth", type=int, default=100)
    return parser


def _load_config(path: str) -> dict:
    try:
        cfg = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise WebIRError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return cfg


def _parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _load_config(args.config) if args.config else {}
    if cfg:
        subparser = parser.subcommands[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = sorted(set(cfg) - known)
        if unknown:
            raise UsageError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
        subparser.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


# -- validation ----------------------------------------------------------------


def _pagerank_params(args) -> ranking.PageRankParams:
    return ranking.PageRankParams(args.damping, args.tolerance, args.max_iterations, args.variant)


def _validate(args) -> dict:
    """Build every parameter object up front; raises ValueError before work starts."""
    if args.jobs < 1:
        raise ValueError("--jobs must be >= 1")
    built = {}
    cmd = args.command
    required = {"ingest": ["corpus"], "eval": ["run", "qrels"], "pool": ["runs"]}
    for name in required.get(cmd, ()):
        if not getattr(args, name):
            raise ValueError(f"--{name} is required (flag or config)")
    if cmd == "ingest":
        if isinstance(args.corpus, str):
            args.corpus = [args.corpus]
        built["policy"] = CrawlPolicy(args.max_depth, args.max_docs)
    elif cmd == "rank":
        built["pagerank"] = _pagerank_params(args)
        built["hits"] = ranking.HitsParams(args.hits_tolerance, args.hits_max_iterations)
        if args.algorithm == "hits" and not args.query:
            raise ValueError("--query is required with --algorithm hits")
        if args.algorithm == "pagerank" and args.query:
            raise ValueError("--query only applies to --algorithm hits")
        if args.root_size < 1:
            raise ValueError("--root-size must be >= 1")
    elif cmd == "dedup":
        if args.w < 1:
            raise ValueError("--w must be >= 1")
        if not 0.0 < args.threshold <= 1.0:
            raise ValueError("--threshold must lie in (0, 1]")
    elif cmd == "search":
        built["pagerank"] = _pagerank_params(args)
        if not 0.0 <= args.alpha <= 1.0:
            raise ValueError("--alpha must lie in [0, 1]")
        if args.limit < 1:
            raise ValueError("--limit must be >= 1")
        if bool(args.query) == bool(args.queries):
            raise ValueError("give exactly one of --query or --queries")
    elif cmd == "eval":
        built["measures"] = _parse_measures(args.measures)
        built["discount"] = evaluation.DiscountSpec(args.discount)
        if args.grade_scale is not None and args.grade_scale < 1:
            raise ValueError("--grade-scale must be >= 1")
    elif cmd == "pool":
        if isinstance(args.runs, str):
            args.runs = [args.runs]
        if args.pool_depth < 1:
            raise ValueError("--pool-depth must be >= 1")
    return built


_MEASURE_ALIASES = {"p": "precision", "precision": "precision", "r": "recall", "recall": "recall", "dcg": "dcg"}


def _parse_measures(spec: str) -> list[tuple[str, int]]:
    measures = []
    for item in spec.split(","):
        name, at, k = item.strip().partition("@")
        if name.lower() not in _MEASURE_ALIASES or not at or not k.isdigit() or int(k) < 1:
            raise ConfigError(f"bad measure {item!r}; expected e.g. precision@10, recall@10, dcg@5")
        measures.append((_MEASURE_ALIASES[name.lower()], int(k)))
    return measures


# -- artifacts -------------------------------------------------------------------


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise WebIRError(f"cannot read {path}: {exc.strerror}") from None


def _load_artifacts(out: Path):
    corpus_path, graph_path = out / CORPUS_FILE, out / GRAPH_FILE
    if not corpus_path.exists() or not graph_path.exists():
        raise WebIRError(f"no ingested corpus in {out}/ (run 'webir ingest --out {out}' first)")
    corpus = corpus_from_snapshot(_read(corpus_path))
    graph = parse_edges(_read(graph_path), nodes=corpus.doc_ids)
    return corpus, graph


# -- commands --------------------------------------------------------------------


def cmd_ingest(args, built) -> int:
    for path in args.corpus:
        if not Path(path).is_file():
            raise WebIRError(f"corpus file not found: {path}")
    source = read_corpus_files(args.corpus)
    seeds = [s.strip() for s in args.seeds.split(",") if s.strip()] if args.seeds else list(source)
    corpus, graph = ingest(source, seeds, built["policy"])
    out = Path(args.out)
    _write(out / CORPUS_FILE, corpus.snapshot())
    _write(out / GRAPH_FILE, graph.dump())
    print(f"documents\t{len(corpus)}")
    print(f"edges\t{graph.edge_count}")
    print(f"skipped_links\t{len(corpus.skipped_links)}")
    return EXIT_OK


def cmd_rank(args, built) -> int:
    out = Path(args.out)
    corpus, graph = _load_artifacts(out)
    if args.algorithm == "pagerank":
        result = ranking.pagerank(graph, built["pagerank"])
        _write(out / "pagerank.tsv", result.dump())
        print(f"pagerank\t{result.variant}\titerations={result.iterations}\tresidual={result.residual:.3g}")
        converged = result.converged
    else:
        idx = index.build_index(corpus)
        query = index.normalize_query(args.query)
        sub = ranking.build_query_subgraph(idx, graph, query, args.root_size, args.expand)
        result = ranking.hits(sub, built["hits"])
        _write(out / "hits_authority.tsv", ranking.format_scores(result.auth))
        _write(out / "hits_hub.tsv", ranking.format_scores(result.hub))
        print(f"hits\tnodes={len(sub)}\titerations={result.iterations}")
        converged = result.converged
    if not converged:
        print("warning: iteration limit reached before convergence", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_dedup(args, built) -> int:
    out = Path(args.out)
    corpus, _ = _load_artifacts(out)
    report = dedup.find_near_duplicates(corpus, args.w, args.threshold, jobs=args.jobs)
    _write(out / "duplicates.tsv", report.dump())
    print(f"pairs\t{len(report.pairs)}")
    return EXIT_OK


def _read_queries(path) -> list[tuple[str, str]]:
    queries = []
    seen = set()
    for lineno, line in enumerate(_read(path).splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        topic, sep, text = line.partition("\t")
        if not sep or not topic.strip() or any(c.isspace() for c in topic.strip()):
            raise WebIRError(f"{path}: line {lineno}: expected 'topic<TAB>query'")
        if topic in seen:
            raise WebIRError(f"{path}: line {lineno}: topic {topic} repeated")
        seen.add(topic)
        queries.append((topic.strip(), text))
    return queries


def cmd_search(args, built) -> int:
    out = Path(args.out)
    corpus, graph = _load_artifacts(out)
    prior = ranking.pagerank(graph, built["pagerank"])
    idx = index.build_index(corpus)
    queries = [(args.topic, args.query)] if args.query else _read_queries(args.queries)

    def run_one(item):
        topic, text = item
        result = index.search(idx, prior, index.normalize_query(text), args.alpha, args.limit)
        return topic, tuple((doc, combined) for doc, combined, _, _ in result.ranked)

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        rankings = dict(pool.map(run_one, queries))
    run = evaluation.Run(rankings, args.tag)
    _write(out / args.run_file, evaluation.write_run(run))
    print(f"topics\t{len(rankings)}")
    print(f"lines\t{sum(len(r) for r in rankings.values())}")
    return EXIT_OK if prior.converged else EXIT_NONCONVERGED


def _evaluate_topic(run, topic, qrels, measures, gain, discount):
    ranking_ = run.ranking(topic)
    rows = []
    has_relevant = qrels.relevant_count(topic) > 0
    for name, k in measures:
        label = f"{name}@{k}"
        if name == "precision":
            value = f"{float(evaluation.precision_at_k(ranking_, qrels, topic, k)):.4f}"
        elif name == "recall":
            value = (
                f"{float(evaluation.recall_at_k(ranking_, qrels, topic, k)):.4f}"
                if has_relevant
                else "undefined"
            )
        else:
            value = f"{evaluation.dcg_at_k(ranking_, qrels, topic, k, gain, discount):.4f}"
        rows.append(f"{run.tag}\t{topic}\t{label}\t{value}\n")
    curves = None
    if has_relevant:
        curve = evaluation.pr_curve(ranking_, qrels, topic)
        curves = (
            evaluation.format_curve(curve),
            evaluation.format_interpolated(evaluation.interpolated_curve(curve)),
        )
    return topic, rows, curves


def cmd_eval(args, built) -> int:
    out = Path(args.out)
    qrels = evaluation.parse_qrels(_read(args.qrels), args.grade_scale)
    runs = evaluation.parse_run(_read(args.run))
    gain = evaluation.make_gain(args.gain, qrels.grade_scale + 1)
    report = []
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        for run in runs:
            results = pool.map(
                lambda t: _evaluate_topic(run, t, qrels, built["measures"], gain, built["discount"]),
                run.topics,
            )
            for topic, rows, curves in results:
                report.extend(rows)
                if curves:
                    stem = out / "curves" / f"{run.tag}.{topic}"
                    _write(stem.with_name(stem.name + ".csv"), curves[0])
                    _write(stem.with_name(stem.name + ".interp.csv"), curves[1])
    text = "".join(report)
    _write(out / "eval.tsv", text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_pool(args, built) -> int:
    out = Path(args.out)
    runs = []
    for path in args.runs:
        runs.extend(evaluation.parse_run(_read(path)))
    pooled = evaluation.pool_all(runs, args.pool_depth)
    _write(out / "pool.txt", "".join(f"{t} {d}\n" for t, d in pooled))
    print(f"pooled\t{len(pooled)}")
    return EXIT_OK


COMMANDS = {
    "ingest": cmd_ingest,
    "rank": cmd_rank,
    "dedup": cmd_dedup,
    "search": cmd_search,
    "eval": cmd_eval,
    "pool": cmd_pool,
}


def main(argv=None) -> int:
    try:
        args = _parse(argv)
        built = _validate(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, ValueError) as exc:
        print(f"webir: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WebIRError as exc:
        print(f"webir: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        return COMMANDS[args.command](args, built)
    except (WebIRError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if type(exc) is KeyError and exc.args else exc
        print(f"webir: error: {msg}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
