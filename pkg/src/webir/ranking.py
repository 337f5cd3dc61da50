"""Link-based ranking: PageRank (query-independent) and HITS (query-dependent).

Two PageRank variants are offered. ``literal`` iterates

    PR(A) = (1 - d) + d * sum(PR(T) / C(T) for T linking to A)

from all-ones scores, so on graphs without dangling pages the scores sum to
the number of pages rather than one. ``normalized`` iterates the
probability form ``(1 - d) / N + d * (...)`` from ``1 / N`` and spreads the
mass of dangling pages uniformly, which keeps the scores a distribution.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass, field
from typing import Mapping

from . import kernels
from .errors import EmptyGraphError, EmptyQueryError, EmptySubgraphError
from .index import text_scores
from .webgraph import WebGraph

VARIANTS = ("literal", "normalized")


@dataclass(frozen=True)
class PageRankParams:
    d: float = 0.85
    tolerance: float = 1e-10
    max_iterations: int = 200
    variant: str = "literal"

    def __post_init__(self):
        if not 0.0 < self.d < 1.0:
            raise ValueError(f"damping factor must lie in (0, 1), got {self.d!r}")
        if not self.tolerance > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")


@dataclass(frozen=True)
class HitsParams:
    tolerance: float = 1e-12
    # small eigengaps (ratio ~0.996 on 20-node graphs) need thousands of sweeps
    max_iterations: int = 20_000

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations!r}")


def _ranked(scores: Mapping[str, float]) -> list[tuple[str, float]]:
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))


def format_scores(scores: Mapping[str, float]) -> str:
    """``doc_id<TAB>score`` lines, 12 significant digits, best first."""
    return "".join(f"{doc}\t{score:.12g}\n" for doc, score in _ranked(scores))


@dataclass(frozen=True)
class RankVector:
    scores: Mapping[str, float]
    algorithm: str
    variant: str
    iterations: int
    residual: float
    converged: bool

    def ranked(self) -> list[tuple[str, float]]:
        """(doc_id, score) pairs by descending score, ties by ascending doc_id."""
        return _ranked(self.scores)

    def dump(self) -> str:
        return format_scores(self.scores)


@dataclass(frozen=True)
class HubAuthScores:
    auth: Mapping[str, float]
    hub: Mapping[str, float]
    iterations: int
    converged: bool
    degenerate: bool = False
    residual: tuple[float, float] = field(default=(0.0, 0.0))


def pagerank(graph: WebGraph, params: PageRankParams = PageRankParams()) -> RankVector:
    n = len(graph)
    if n == 0:
        raise EmptyGraphError("pagerank of an empty graph")
    _, in_indptr, in_indices, out_indptr, _ = graph.csr()
    outdeg = array("q", (out_indptr[i + 1] - out_indptr[i] for i in range(n)))
    d = params.d
    if params.variant == "literal":
        old = array("d", [1.0]) * n
        base, redistribute = 1.0 - d, False
        dangling = array("q")
    else:
        old = array("d", [1.0 / n]) * n
        base, redistribute = (1.0 - d) / n, True
        dangling = array("q", (i for i in range(n) if outdeg[i] == 0))
    new = array("d", old)

    residual = math.inf
    iterations = 0
    while iterations < params.max_iterations:
        residual = kernels.pagerank_sweep(
            in_indptr, in_indices, outdeg, dangling, old, new, d, base, redistribute
        )
        iterations += 1
        old, new = new, old
        if residual < params.tolerance:
            break
    return RankVector(
        scores=dict(zip(graph.order, old)),
        algorithm="pagerank",
        variant=params.variant,
        iterations=iterations,
        residual=residual,
        converged=residual < params.tolerance,
    )


def hits(graph: WebGraph, params: HitsParams = HitsParams()) -> HubAuthScores:
    """Hub and authority scores by the normalized mutual-reinforcement iteration.

    Every round applies the authority update (sum of hub scores of the pages
    linking in), then the hub update (sum of the fresh authority scores of
    the pages linked to), then scales each vector to unit Euclidean norm.
    Iteration stops when neither vector moves by more than ``tolerance`` in
    max-norm. A graph without edges yields all-zero vectors flagged
    ``degenerate``.
    """
    n = len(graph)
    if n == 0:
        raise EmptyGraphError("hits of an empty graph")
    order = graph.order
    if graph.edge_count == 0:
        zeros = dict.fromkeys(order, 0.0)
        return HubAuthScores(zeros, dict(zeros), iterations=0, converged=True, degenerate=True)

    _, in_indptr, in_indices, out_indptr, out_indices = graph.csr()
    auth = array("d", [1.0]) * n
    hub = array("d", [1.0]) * n
    new_auth = array("d", auth)
    new_hub = array("d", hub)

    iterations = 0
    delta = (math.inf, math.inf)
    while iterations < params.max_iterations:
        delta = kernels.hits_sweep(
            in_indptr, in_indices, out_indptr, out_indices, auth, hub, new_auth, new_hub
        )
        iterations += 1
        auth, new_auth = new_auth, auth
        hub, new_hub = new_hub, hub
        if max(delta) < params.tolerance:
            break
    return HubAuthScores(
        auth=dict(zip(order, auth)),
        hub=dict(zip(order, hub)),
        iterations=iterations,
        converged=max(delta) < params.tolerance,
        residual=tuple(delta),
    )


def authority_update(graph: WebGraph, hub: Mapping[str, float]) -> dict[str, float]:
    """One unnormalized authority update."""
    return {p: sum(hub[q] for q in graph.backward[p]) for p in graph.order}


def hub_update(graph: WebGraph, auth: Mapping[str, float]) -> dict[str, float]:
    """One unnormalized hub update."""
    return {p: sum(auth[q] for q in graph.forward[p]) for p in graph.order}


def build_query_subgraph(index, graph: WebGraph, query, root_size: int = 200, expand: bool = True) -> WebGraph:
    """Query-specific graph for HITS.

    The root set is the ``root_size`` best documents by text score; with
    ``expand`` every page linking to or linked from a root page is added.
    """
    if root_size < 1:
        raise ValueError(f"root_size must be positive, got {root_size!r}")
    terms = getattr(query, "terms", query)
    if not terms:
        raise EmptyQueryError("empty query")
    scored = text_scores(index, terms)
    root = [doc for doc, _ in _ranked(scored)[:root_size] if doc in graph]
    if not root:
        raise EmptySubgraphError(f"query {' '.join(terms)!r} matches no page in the graph")
    keep = set(root)
    if expand:
        for page in root:
            keep.update(graph.forward[page])
            keep.update(graph.backward[page])
    return graph.subgraph(keep)
