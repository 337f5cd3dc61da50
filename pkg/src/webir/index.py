"""Inverted index and the two-stage query processor.

Text score of a document is the sum over query terms of tf / doc_length.
The final score mixes it with a query-independent prior (PageRank) scaled
to a maximum of 1 over the candidate set::

    combined = alpha * text + (1 - alpha) * prior / max(prior over candidates)
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .corpus import Corpus, canonicalize
from .errors import EmptyCorpusError, EmptyQueryError, FormatError

DEFAULT_ALPHA = 0.7


@dataclass(frozen=True)
class NormalizedQuery:
    terms: tuple[str, ...]

    def __bool__(self) -> bool:
        return bool(self.terms)


def normalize_query(raw: str) -> NormalizedQuery:
    return NormalizedQuery(canonicalize(raw))


@dataclass(frozen=True)
class InvertedIndex:
    postings: Mapping[str, tuple[tuple[str, int], ...]]
    doc_lengths: Mapping[str, int]

    @property
    def vocabulary(self) -> tuple[str, ...]:
        return tuple(sorted(self.postings))

    def tf(self, token: str, doc_id: str) -> int:
        for doc, count in self.postings.get(token, ()):
            if doc == doc_id:
                return count
        return 0

    def dump(self) -> str:
        """``token<TAB>doc:tf,doc:tf`` lines in token order."""
        lines = []
        for token in self.vocabulary:
            plist = ",".join(f"{doc}:{tf}" for doc, tf in self.postings[token])
            lines.append(f"{token}\t{plist}\n")
        return "".join(lines)


def build_index(corpus: Corpus) -> InvertedIndex:
    if len(corpus) == 0:
        raise EmptyCorpusError("cannot index an empty corpus")
    postings: dict[str, list[tuple[str, int]]] = {}
    lengths = {}
    # corpus iterates in doc_id order, so every posting list comes out sorted
    for doc in corpus:
        lengths[doc.doc_id] = len(doc.tokens)
        for token, count in Counter(doc.tokens).items():
            postings.setdefault(token, []).append((doc.doc_id, count))
    return InvertedIndex(
        postings={t: tuple(postings[t]) for t in sorted(postings)},
        doc_lengths=lengths,
    )


def load_index(text: str, doc_ids: Iterable[str] = ()) -> InvertedIndex:
    """Parse :meth:`InvertedIndex.dump` output.

    Document lengths are recovered as the sum of a document's term
    frequencies; ``doc_ids`` adds documents that have no tokens at all.
    """
    postings: dict[str, tuple[tuple[str, int], ...]] = {}
    lengths: dict[str, int] = dict.fromkeys(doc_ids, 0)
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        token, sep, plist = line.partition("\t")
        if not sep or not token or not plist:
            raise FormatError("expected 'token<TAB>doc:tf,...'", lineno)
        entries = []
        for item in plist.split(","):
            doc, colon, tf = item.rpartition(":")
            if not colon or not doc or not tf.isdigit() or int(tf) < 1:
                raise FormatError(f"bad posting {item!r}", lineno)
            entries.append((doc, int(tf)))
            lengths[doc] = lengths.get(doc, 0) + int(tf)
        postings[token] = tuple(sorted(entries))
    return InvertedIndex(postings={t: postings[t] for t in sorted(postings)}, doc_lengths=lengths)


def text_scores(index: InvertedIndex, terms: Sequence[str]) -> dict[str, float]:
    """Length-normalized tf summed over query terms (OR semantics)."""
    scores: dict[str, float] = {}
    for term in terms:
        for doc, tf in index.postings.get(term, ()):
            scores[doc] = scores.get(doc, 0.0) + tf / index.doc_lengths[doc]
    return scores


@dataclass(frozen=True)
class SearchResult:
    ranked: tuple[tuple[str, float, float, float], ...]
    alpha: float

    @property
    def doc_ids(self) -> tuple[str, ...]:
        return tuple(r[0] for r in self.ranked)


def search(
    index: InvertedIndex,
    prior,
    query: NormalizedQuery | Sequence[str],
    alpha: float = DEFAULT_ALPHA,
    limit: int = 1000,
) -> SearchResult:
    """Rank documents containing at least one query term.

    ``prior`` is a :class:`~webir.ranking.RankVector` or a plain mapping of
    doc_id to score covering every indexed document.
    """
    terms = tuple(getattr(query, "terms", query))
    if not terms:
        raise EmptyQueryError("empty query")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    if limit < 1:
        raise ValueError(f"limit must be positive, got {limit!r}")
    prior_scores = getattr(prior, "scores", prior)

    text = text_scores(index, terms)
    missing = [doc for doc in text if doc not in prior_scores]
    if missing:
        raise KeyError(f"prior has no score for {sorted(missing)[:5]}")
    top_prior = max((prior_scores[doc] for doc in text), default=0.0)
    rows = []
    for doc, t in text.items():
        p = prior_scores[doc] / top_prior if top_prior > 0 else 0.0
        rows.append((doc, alpha * t + (1.0 - alpha) * p, t, p))
    rows.sort(key=lambda r: (-r[1], r[0]))
    return SearchResult(tuple(rows[:limit]), alpha)
