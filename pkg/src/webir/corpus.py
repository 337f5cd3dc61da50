"""Tokenization and seed-driven ingestion of a linked local corpus.

Corpus files are UTF-8 text with one document per line::

    doc_id<TAB>uri<TAB>comma,separated,outlinks<TAB>raw text

Lines starting with ``#`` and blank lines are skipped.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import FormatError, UnknownSeedError
from .webgraph import WebGraph

_TOKEN_RE = re.compile(r"[^\W_]+")
_BAD_ID_RE = re.compile(r"[\s,]")


def canonicalize(raw_text: str) -> tuple[str, ...]:
    """Case-fold ``raw_text`` and split it on every non-alphanumeric character.

    >>> canonicalize("Internet, Scaled   DATA.")
    ('internet', 'scaled', 'data')
    """
    return tuple(_TOKEN_RE.findall(raw_text.casefold()))


def validate_doc_id(doc_id: str, line: int | None = None) -> str:
    if not doc_id or _BAD_ID_RE.search(doc_id):
        raise FormatError(f"invalid doc_id {doc_id!r} (empty, whitespace or comma)", line)
    return doc_id


@dataclass(frozen=True)
class Document:
    doc_id: str
    uri: str
    tokens: tuple[str, ...]
    out_links: tuple[str, ...] = ()

    def __post_init__(self):
        validate_doc_id(self.doc_id)

    def to_record(self) -> str:
        """Serialize as a corpus-file line with the canonical tokens as text."""
        return "\t".join((self.doc_id, self.uri, ",".join(self.out_links), " ".join(self.tokens)))


@dataclass(frozen=True)
class CrawlPolicy:
    max_depth: int = 100
    max_docs: int = 100_000

    def __post_init__(self):
        if not isinstance(self.max_depth, int) or self.max_depth < 0:
            raise ValueError(f"max_depth must be a nonnegative integer, got {self.max_depth!r}")
        if not isinstance(self.max_docs, int) or self.max_docs < 1:
            raise ValueError(f"max_docs must be a positive integer, got {self.max_docs!r}")


@dataclass(frozen=True)
class Corpus:
    """Immutable document store iterated in ascending doc_id order.

    ``crawl_order`` keeps the order in which ingestion visited documents and
    ``skipped_links`` the (source, target) pairs whose target was not in the
    source files.
    """

    documents: Mapping[str, Document]
    crawl_order: tuple[str, ...] = ()
    skipped_links: tuple[tuple[str, str], ...] = ()
    _ids: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for key, doc in self.documents.items():
            if key != doc.doc_id:
                raise ValueError(f"corpus key {key!r} does not match doc_id {doc.doc_id!r}")
        ids = tuple(sorted(self.documents))
        object.__setattr__(self, "documents", MappingProxyType({k: self.documents[k] for k in ids}))
        object.__setattr__(self, "_ids", ids)

    @classmethod
    def from_documents(cls, docs: Iterable[Document]) -> "Corpus":
        store: dict[str, Document] = {}
        for doc in docs:
            if doc.doc_id in store:
                raise ValueError(f"duplicate doc_id {doc.doc_id!r}")
            store[doc.doc_id] = doc
        return cls(store, crawl_order=tuple(store))

    @property
    def doc_ids(self) -> tuple[str, ...]:
        return self._ids

    def __len__(self) -> int:
        return len(self._ids)

    def __iter__(self) -> Iterator[Document]:
        return (self.documents[k] for k in self._ids)

    def __contains__(self, doc_id) -> bool:
        return doc_id in self.documents

    def __getitem__(self, doc_id: str) -> Document:
        return self.documents[doc_id]

    def snapshot(self) -> str:
        """Canonical text form: one record per document, sorted by doc_id."""
        return "".join(doc.to_record() + "\n" for doc in self)


def _split_record(line: str, lineno: int | None) -> list[str]:
    fields = line.rstrip("\r\n").split("\t", 3)
    if len(fields) != 4:
        raise FormatError(f"expected 4 tab-separated fields, found {len(fields)}", lineno)
    return fields


def extract_links(record: str, lineno: int | None = None) -> tuple[str, ...]:
    """Return the declared out-link targets of one corpus record, in file order.

    Duplicates are preserved; the graph collapses them later.
    """
    link_field = _split_record(record, lineno)[2].strip()
    if not link_field:
        return ()
    targets = tuple(t.strip() for t in link_field.split(","))
    for t in targets:
        validate_doc_id(t, lineno)
    return targets


def parse_record(record: str, lineno: int | None = None) -> Document:
    doc_id, uri, _, text = _split_record(record, lineno)
    validate_doc_id(doc_id, lineno)
    return Document(doc_id, uri, canonicalize(text), extract_links(record, lineno))


def parse_corpus(text: str) -> dict[str, Document]:
    """Parse corpus-file text into documents keyed by doc_id (file order)."""
    docs: dict[str, Document] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        doc = parse_record(line, lineno)
        if doc.doc_id in docs:
            raise FormatError(f"duplicate doc_id {doc.doc_id!r}", lineno)
        docs[doc.doc_id] = doc
    return docs


def read_corpus_files(paths: str | Path | Sequence[str | Path]) -> dict[str, Document]:
    """Read and merge one or more corpus files; doc_ids must be unique across them."""
    if isinstance(paths, (str, Path)):
        paths = [paths]
    merged: dict[str, Document] = {}
    for path in paths:
        path = Path(path)
        try:
            docs = parse_corpus(path.read_text(encoding="utf-8"))
        except FormatError as exc:
            raise FormatError(f"{path}: {exc}") from None
        for doc_id, doc in docs.items():
            if doc_id in merged:
                raise FormatError(f"{path}: doc_id {doc_id!r} already defined in an earlier file")
            merged[doc_id] = doc
    return merged


def load_corpus(paths) -> Corpus:
    """Load every record of the given files without traversal."""
    return Corpus(read_corpus_files(paths), crawl_order=())


def corpus_from_snapshot(text: str) -> Corpus:
    """Rebuild a corpus from :meth:`Corpus.snapshot` output."""
    return Corpus(parse_corpus(text))


def graph_of(corpus: Corpus) -> WebGraph:
    """Web graph over ``corpus``: links to documents outside it are dropped."""
    edges = [(d.doc_id, t) for d in corpus for t in d.out_links if t in corpus]
    return WebGraph.from_edges(edges, nodes=corpus.doc_ids)


def ingest(
    source: Mapping[str, Document] | str | Path | Sequence[str | Path],
    seeds: Sequence[str],
    policy: CrawlPolicy = CrawlPolicy(),
) -> tuple[Corpus, WebGraph]:
    """Breadth-first traversal of ``source`` starting from ``seeds``.

    Each document is visited at most once. Children are enqueued in link
    order; ``max_docs`` is enforced when a document is dequeued and no links
    are followed from documents at ``max_depth``. Link targets missing from
    the source are recorded in ``Corpus.skipped_links``.
    """
    if not isinstance(source, Mapping):
        source = read_corpus_files(source)
    for seed in seeds:
        if seed not in source:
            raise UnknownSeedError(seed)

    frontier: deque[tuple[str, int]] = deque()
    seen: set[str] = set()
    for seed in seeds:
        if seed not in seen:
            seen.add(seed)
            frontier.append((seed, 0))

    order: list[str] = []
    skipped: list[tuple[str, str]] = []
    while frontier and len(order) < policy.max_docs:
        doc_id, depth = frontier.popleft()
        order.append(doc_id)
        if depth >= policy.max_depth:
            continue
        for target in source[doc_id].out_links:
            if target not in source:
                skipped.append((doc_id, target))
            elif target not in seen:
                seen.add(target)
                frontier.append((target, depth + 1))

    corpus = Corpus(
        {d: source[d] for d in order},
        crawl_order=tuple(order),
        skipped_links=tuple(skipped),
    )
    return corpus, graph_of(corpus)
