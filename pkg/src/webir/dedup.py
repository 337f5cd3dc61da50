"""Near-duplicate detection by w-shingling.

Each document is reduced to the set of fingerprints of its contiguous
w-token windows; the resemblance of two documents is the Jaccard ratio of
those sets. Fingerprints are 64-bit FNV-1a over the UTF-8 tokens joined by
a 0x1F byte.
"""

from __future__ import annotations

from array import array
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .corpus import Corpus
from .errors import UndefinedResemblanceError, WindowMismatchError

DEFAULT_W = 4
DEFAULT_THRESHOLD = 0.9


def shingles(tokens: Sequence[str], w: int = DEFAULT_W) -> set[tuple[str, ...]]:
    if w < 1:
        raise ValueError(f"window size must be >= 1, got {w!r}")
    tokens = tuple(tokens)
    return {tokens[i : i + w] for i in range(len(tokens) - w + 1)}


def fingerprint(shingle: Sequence[str]) -> int:
    if not shingle:
        raise ValueError("cannot fingerprint an empty shingle")
    return kernels.fnv1a64("\x1f".join(shingle).encode("utf-8"))


@dataclass(frozen=True)
class ShingleSet:
    w: int
    prints: frozenset[int]
    source_doc: str = ""

    def __len__(self) -> int:
        return len(self.prints)


def shingle_set(tokens: Sequence[str], w: int = DEFAULT_W, source_doc: str = "") -> ShingleSet:
    if w < 1:
        raise ValueError(f"window size must be >= 1, got {w!r}")
    encoded = [t.encode("utf-8") for t in tokens]
    return ShingleSet(w, frozenset(kernels.fingerprint_windows(encoded, w)), source_doc)


def resemblance(a: ShingleSet, b: ShingleSet) -> float:
    if a.w != b.w:
        raise WindowMismatchError(f"window sizes differ: {a.w} vs {b.w}")
    if not a.prints and not b.prints:
        raise UndefinedResemblanceError("resemblance of two empty shingle sets")
    inter = len(a.prints & b.prints)
    return inter / (len(a.prints) + len(b.prints) - inter)


@dataclass(frozen=True)
class DuplicateReport:
    pairs: tuple[tuple[str, str, float], ...]
    threshold: float

    def dump(self) -> str:
        return "".join(f"{a}\t{b}\t{r:.6f}\n" for a, b, r in self.pairs)


def _scan_rows(rows, ids, sorted_prints, threshold):
    found = []
    n = len(ids)
    for i in rows:
        a = sorted_prints[i]
        for j in range(i + 1, n):
            b = sorted_prints[j]
            if not a and not b:
                continue
            inter = kernels.intersect_count(a, b)
            r = inter / (len(a) + len(b) - inter)
            if r >= threshold:
                found.append((ids[i], ids[j], r))
    return found


def find_near_duplicates(
    corpus: Corpus,
    w: int = DEFAULT_W,
    threshold: float = DEFAULT_THRESHOLD,
    jobs: int = 1,
) -> DuplicateReport:
    """All document pairs with resemblance >= ``threshold`` (exact all-pairs).

    Pairs where both documents are shorter than ``w`` have no defined
    resemblance and are skipped. ``jobs`` splits the pair scan across
    threads; the report is identical for any value.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must lie in (0, 1], got {threshold!r}")
    ids = corpus.doc_ids
    sorted_prints = [
        array("Q", sorted(shingle_set(doc.tokens, w).prints)) for doc in corpus
    ]
    rows = range(len(ids))
    if jobs > 1 and len(ids) > 1:
        # interleave rows so the triangular workload is balanced
        chunks = [rows[k::jobs] for k in range(jobs)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(lambda c: _scan_rows(c, ids, sorted_prints, threshold), chunks)
            found = [p for part in parts for p in part]
    else:
        found = _scan_rows(rows, ids, sorted_prints, threshold)
    found.sort(key=lambda p: (-p[2], p[0], p[1]))
    return DuplicateReport(tuple(found), threshold)
