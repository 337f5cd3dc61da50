"""Test-collection evaluation: qrels and runs, precision/recall, curves, DCG, pooling.

Precision and recall are computed as :class:`fractions.Fraction` so exact
ratios such as 8/10 and 8/162 survive until they are formatted. Relevance
is binary for these measures (grade >= 1); unjudged documents count as
grade 0 everywhere.

File formats (whitespace separated)::

    qrels:  topic iter doc_id grade
    run:    topic Q0 doc_id rank score tag
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError, DuplicateJudgmentError, FormatError, UndefinedRecallError

ELEVEN_POINTS = tuple(Fraction(i, 10) for i in range(11))


class ShortRankingWarning(UserWarning):
    """A cutoff exceeded the length of the ranked list."""


def topic_key(topic: str):
    """Sort key placing numeric topic ids in numeric order before the rest."""
    return (0, int(topic), topic) if topic.isdigit() else (1, 0, topic)


# -- judgments and runs ------------------------------------------------------


@dataclass(frozen=True)
class Qrels:
    judgments: Mapping[tuple[str, str], int]
    grade_scale: int = 1

    def __post_init__(self):
        for (topic, doc), grade in self.judgments.items():
            if not 0 <= grade <= self.grade_scale:
                raise ValueError(
                    f"grade {grade} for ({topic}, {doc}) outside [0, {self.grade_scale}]"
                )

    @classmethod
    def from_grades(cls, topic: str, grades: Mapping[str, int], grade_scale: int | None = None) -> "Qrels":
        judgments = {(topic, doc): g for doc, g in grades.items()}
        scale = max(judgments.values(), default=1) if grade_scale is None else grade_scale
        return cls(judgments, max(scale, 1))

    def grade(self, topic: str, doc_id: str) -> int:
        return self.judgments.get((topic, doc_id), 0)

    def is_relevant(self, topic: str, doc_id: str) -> bool:
        return self.grade(topic, doc_id) >= 1

    def relevant_count(self, topic: str) -> int:
        return sum(1 for (t, _), g in self.judgments.items() if t == topic and g >= 1)

    @property
    def topics(self) -> tuple[str, ...]:
        return tuple(sorted({t for t, _ in self.judgments}, key=topic_key))


@dataclass(frozen=True)
class Run:
    """One system's ranked output, per topic, best first."""

    rankings: Mapping[str, tuple[tuple[str, float], ...]]
    tag: str = "run"

    def __post_init__(self):
        for topic, ranking in self.rankings.items():
            seen = set()
            prev = math.inf
            for doc, score in ranking:
                if doc in seen:
                    raise ValueError(f"document {doc!r} repeated in topic {topic!r}")
                if score > prev:
                    raise ValueError(f"scores increase down the ranking of topic {topic!r}")
                seen.add(doc)
                prev = score

    @property
    def topics(self) -> tuple[str, ...]:
        return tuple(sorted(self.rankings, key=topic_key))

    def ranking(self, topic: str) -> tuple[str, ...]:
        return tuple(doc for doc, _ in self.rankings.get(topic, ()))


def parse_qrels(text: str, grade_scale: int | None = None) -> Qrels:
    """Parse qrels text. ``grade_scale`` defaults to the largest grade seen."""
    judgments: dict[tuple[str, str], int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 4:
            raise FormatError(f"expected 'topic iter doc_id grade', got {len(parts)} fields", lineno)
        topic, _, doc, grade = parts
        try:
            g = int(grade)
        except ValueError:
            raise FormatError(f"grade {grade!r} is not an integer", lineno) from None
        if g < 0:
            raise FormatError(f"negative grade {g}", lineno)
        if (topic, doc) in judgments:
            raise DuplicateJudgmentError(f"duplicate judgment for topic {topic} doc {doc}", lineno)
        judgments[(topic, doc)] = g
    scale = max(judgments.values(), default=1) if grade_scale is None else grade_scale
    try:
        return Qrels(judgments, max(scale, 1))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def write_qrels(qrels: Qrels) -> str:
    items = sorted(qrels.judgments.items(), key=lambda kv: (topic_key(kv[0][0]), kv[0][1]))
    return "".join(f"{t} 0 {d} {g}\n" for (t, d), g in items)


def parse_run(text: str) -> list[Run]:
    """Parse a run file into one :class:`Run` per tag, in order of first appearance.

    Within a topic, entries are ordered by their rank field.
    """
    grouped: dict[str, dict[str, list[tuple[int, int, str, float]]]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 6:
            raise FormatError(f"expected 'topic Q0 doc_id rank score tag', got {len(parts)} fields", lineno)
        topic, _, doc, rank, score, tag = parts
        try:
            r, s = int(rank), float(score)
        except ValueError:
            raise FormatError(f"bad rank {rank!r} or score {score!r}", lineno) from None
        if not math.isfinite(s):
            raise FormatError(f"score {score!r} is not finite", lineno)
        grouped.setdefault(tag, {}).setdefault(topic, []).append((r, lineno, doc, s))
    runs = []
    for tag, topics in grouped.items():
        rankings = {}
        for topic, rows in topics.items():
            rows.sort()
            rankings[topic] = tuple((doc, s) for _, _, doc, s in rows)
        try:
            runs.append(Run(rankings, tag))
        except ValueError as exc:
            raise FormatError(f"run {tag!r}: {exc}") from None
    return runs


def write_run(run: Run) -> str:
    lines = []
    for topic in run.topics:
        for rank, (doc, score) in enumerate(run.rankings[topic], start=1):
            lines.append(f"{topic} Q0 {doc} {rank} {score!r} {run.tag}\n")
    return "".join(lines)


# -- precision and recall ----------------------------------------------------


def _relevant_prefix_count(ranking: Sequence[str], qrels: Qrels, topic: str, k: int) -> int:
    return sum(1 for doc in ranking[:k] if qrels.is_relevant(topic, doc))


def _check_cutoff(ranking: Sequence[str], k: int) -> None:
    if k < 1:
        raise ValueError(f"cutoff must be >= 1, got {k!r}")
    if k > len(ranking):
        warnings.warn(
            f"cutoff {k} exceeds ranking length {len(ranking)}; missing ranks count as nonrelevant",
            ShortRankingWarning,
            stacklevel=3,
        )


def _known_relevant(qrels: Qrels, topic: str) -> int:
    total = qrels.relevant_count(topic)
    if total == 0:
        raise UndefinedRecallError(f"topic {topic!r} has no known relevant documents")
    return total


def precision_at_k(ranking: Sequence[str], qrels: Qrels, topic: str, k: int) -> Fraction:
    """Relevant documents among the first ``k``, divided by ``k``.

    A ranking shorter than ``k`` is still divided by ``k`` (with a
    :class:`ShortRankingWarning`).
    """
    _check_cutoff(ranking, k)
    return Fraction(_relevant_prefix_count(ranking, qrels, topic, k), k)


def recall_at_k(ranking: Sequence[str], qrels: Qrels, topic: str, k: int) -> Fraction:
    total = _known_relevant(qrels, topic)
    if k < 1:
        raise ValueError(f"cutoff must be >= 1, got {k!r}")
    return Fraction(_relevant_prefix_count(ranking, qrels, topic, k), total)


@dataclass(frozen=True)
class PRPoint:
    k: int
    recall: Fraction
    precision: Fraction


def pr_curve(ranking: Sequence[str], qrels: Qrels, topic: str) -> list[PRPoint]:
    """Raw precision/recall at every rank 1..len(ranking)."""
    total = _known_relevant(qrels, topic)
    points = []
    hits = 0
    for k, doc in enumerate(ranking, start=1):
        if qrels.is_relevant(topic, doc):
            hits += 1
        points.append(PRPoint(k, Fraction(hits, total), Fraction(hits, k)))
    return points


def interpolated_precision(curve: Sequence[PRPoint], r) -> Fraction:
    """Highest precision at any cutoff whose recall is at least ``r`` (0 if none)."""
    if not 0 <= r <= 1:
        raise ValueError(f"recall level must lie in [0, 1], got {r!r}")
    return max((p.precision for p in curve if p.recall >= r), default=Fraction(0))


def interpolated_curve(curve: Sequence[PRPoint], levels: Iterable = ELEVEN_POINTS) -> list[tuple[Fraction, Fraction]]:
    """Interpolated precision on a recall grid (11 points by default)."""
    levels = [Fraction(r) if not isinstance(r, float) else Fraction(str(r)) for r in levels]
    # suffix maxima over the curve; recall is nondecreasing in k
    best = Fraction(0)
    suffix = [Fraction(0)] * len(curve)
    for i in range(len(curve) - 1, -1, -1):
        best = max(best, curve[i].precision)
        suffix[i] = best
    out = []
    for r in levels:
        value = next((suffix[i] for i, p in enumerate(curve) if p.recall >= r), Fraction(0))
        out.append((r, value))
    return out


# -- graded measures ---------------------------------------------------------


@dataclass(frozen=True)
class GainSpec:
    kind: str
    table: tuple[float, ...]

    def __post_init__(self):
        if not self.table or self.table[0] != 0:
            raise ConfigError("gain of grade 0 must be 0")
        if any(b < a for a, b in zip(self.table, self.table[1:])):
            raise ConfigError("gain must be nondecreasing in grade")

    def __call__(self, grade: int) -> float:
        if not 0 <= grade < len(self.table):
            raise ValueError(f"grade {grade} outside the {len(self.table)}-grade gain table")
        return self.table[grade]


def make_gain(kind: str, scale: int) -> GainSpec:
    """Gain table over ``scale`` grades (0 .. scale-1).

    ``linear`` maps grade g to g, ``exponential`` to 2**g - 1.
    """
    if scale < 2:
        raise ConfigError(f"a gain scale needs at least 2 grades, got {scale!r}")
    if kind == "linear":
        return GainSpec(kind, tuple(range(scale)))
    if kind == "exponential":
        return GainSpec(kind, tuple(2**g - 1 for g in range(scale)))
    raise ConfigError(f"unknown gain kind {kind!r} (use linear, exponential or a custom table)")


def custom_gain(table: Sequence[float]) -> GainSpec:
    return GainSpec("custom", tuple(table))


_DISCOUNTS = {
    "log2": lambda k: math.log2(k + 1),
    "log2max": lambda k: max(1.0, math.log2(k)),
    "constant": lambda k: 1.0,
}


@dataclass(frozen=True)
class DiscountSpec:
    """Rank discount: ``log2`` is log2(k+1), ``log2max`` is max(1, log2 k),
    ``constant`` divides by 1."""

    kind: str = "log2"
    _fn: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in _DISCOUNTS:
            raise ConfigError(f"unknown discount {self.kind!r}; choose from {sorted(_DISCOUNTS)}")
        object.__setattr__(self, "_fn", _DISCOUNTS[self.kind])

    def __call__(self, k: int) -> float:
        if k < 1:
            raise ValueError(f"rank must be >= 1, got {k!r}")
        return self._fn(k)


def dcg_at_k(
    ranking: Sequence[str],
    qrels: Qrels,
    topic: str,
    k: int,
    gain: GainSpec | None = None,
    discount: DiscountSpec | None = None,
) -> float:
    """Sum of gain(grade) / discount(rank) over ranks 1..k.

    Defaults: exponential gain over the qrels' grade scale, log2(k+1) discount.
    """
    if k < 1:
        raise ValueError(f"cutoff must be >= 1, got {k!r}")
    gain = gain or make_gain("exponential", qrels.grade_scale + 1)
    discount = discount or DiscountSpec("log2")
    total = 0.0
    for rank, doc in enumerate(ranking[:k], start=1):
        total += gain(qrels.grade(topic, doc)) / discount(rank)
    return total


# -- pooling -------------------------------------------------------------------


def pool(runs: Iterable[Run], topic: str, depth: int) -> set[tuple[str, str]]:
    """Union of every run's top-``depth`` documents for ``topic``."""
    if depth < 1:
        raise ValueError(f"pool depth must be >= 1, got {depth!r}")
    pooled = set()
    for run in runs:
        pooled.update((topic, doc) for doc in run.ranking(topic)[:depth])
    return pooled


def pool_all(runs: Sequence[Run], depth: int) -> list[tuple[str, str]]:
    """Pool every topic present in any run; sorted (topic, doc_id) pairs."""
    topics = {t for run in runs for t in run.rankings}
    pooled = set()
    for topic in topics:
        pooled |= pool(runs, topic, depth)
    return sorted(pooled, key=lambda td: (topic_key(td[0]), td[1]))


# -- emission ------------------------------------------------------------------


def format_curve(curve: Sequence[PRPoint]) -> str:
    return "".join(f"{p.k},{float(p.recall):.6f},{float(p.precision):.6f}\n" for p in curve)


def format_interpolated(points: Sequence[tuple[Fraction, Fraction]]) -> str:
    return "".join(f"{float(r)},{float(p):.6f}\n" for r, p in points)
