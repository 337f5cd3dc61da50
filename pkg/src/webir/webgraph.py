"""Directed page graph with forward and backward adjacency."""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import FormatError, UnknownNodeError


@dataclass(frozen=True)
class WebGraph:
    """Immutable directed graph without self-loops or parallel edges.

    ``forward[u]`` and ``backward[v]`` are sorted tuples and exact transposes
    of each other. Build instances with :meth:`from_edges`.
    """

    nodes: frozenset[str]
    forward: Mapping[str, tuple[str, ...]]
    backward: Mapping[str, tuple[str, ...]]
    _order: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_order", tuple(sorted(self.nodes)))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]], nodes: Iterable[str] = ()) -> "WebGraph":
        """Build a graph; self-loops are dropped and repeated edges collapsed.

        Edge endpoints are added to the node set automatically.
        """
        node_set = set(nodes)
        fwd: dict[str, set[str]] = {}
        bwd: dict[str, set[str]] = {}
        for u, v in edges:
            node_set.add(u)
            node_set.add(v)
            if u == v:
                continue
            fwd.setdefault(u, set()).add(v)
            bwd.setdefault(v, set()).add(u)
        ordered = sorted(node_set)
        return cls(
            frozenset(node_set),
            {n: tuple(sorted(fwd.get(n, ()))) for n in ordered},
            {n: tuple(sorted(bwd.get(n, ()))) for n in ordered},
        )

    @property
    def order(self) -> tuple[str, ...]:
        """Nodes in ascending doc_id order."""
        return self._order

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, page) -> bool:
        return page in self.nodes

    def _check(self, page: str) -> None:
        if page not in self.nodes:
            raise UnknownNodeError(page)

    def out_degree(self, page: str) -> int:
        self._check(page)
        return len(self.forward[page])

    def out_links(self, page: str) -> tuple[str, ...]:
        self._check(page)
        return self.forward[page]

    def back_links(self, page: str) -> tuple[str, ...]:
        self._check(page)
        return self.backward[page]

    def edges(self) -> list[tuple[str, str]]:
        """All edges, sorted lexicographically."""
        return [(u, v) for u in self._order for v in self.forward[u]]

    @property
    def edge_count(self) -> int:
        return sum(len(v) for v in self.forward.values())

    def subgraph(self, keep: Iterable[str]) -> "WebGraph":
        """Induced subgraph on ``keep``."""
        keep = frozenset(keep)
        missing = keep - self.nodes
        if missing:
            raise UnknownNodeError(sorted(missing))
        edges = ((u, v) for u in keep for v in self.forward[u] if v in keep)
        return WebGraph.from_edges(edges, nodes=keep)

    def dump(self) -> str:
        """Canonical edge list, one ``source<TAB>target`` line per edge."""
        return "".join(f"{u}\t{v}\n" for u, v in self.edges())

    def csr(self):
        """Integer adjacency over :attr:`order` for the numeric kernels.

        Returns ``(index, in_indptr, in_indices, out_indptr, out_indices)``
        where ``index`` maps doc_id to position and the arrays are
        ``array('q')``.
        """
        index = {n: i for i, n in enumerate(self._order)}
        in_indptr, in_indices = array("q", [0]), array("q")
        out_indptr, out_indices = array("q", [0]), array("q")
        for n in self._order:
            in_indices.extend(index[u] for u in self.backward[n])
            in_indptr.append(len(in_indices))
            out_indices.extend(index[v] for v in self.forward[n])
            out_indptr.append(len(out_indices))
        return index, in_indptr, in_indices, out_indptr, out_indices


def out_degree(graph: WebGraph, page: str) -> int:
    return graph.out_degree(page)


def back_links(graph: WebGraph, page: str) -> tuple[str, ...]:
    return graph.back_links(page)


def subgraph(graph: WebGraph, keep: Iterable[str]) -> WebGraph:
    return graph.subgraph(keep)


def parse_edges(text: str, nodes: Iterable[str] = ()) -> WebGraph:
    """Inverse of :meth:`WebGraph.dump`; ``nodes`` restores isolated pages."""
    edges = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise FormatError("expected 'source<TAB>target'", lineno)
        edges.append((parts[0], parts[1]))
    return WebGraph.from_edges(edges, nodes=nodes)
