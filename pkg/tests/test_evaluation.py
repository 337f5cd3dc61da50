import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import worked_example_fixture
from webir.errors import ConfigError, DuplicateJudgmentError, FormatError, UndefinedRecallError
from webir.evaluation import (
    ELEVEN_POINTS,
    DiscountSpec,
    GainSpec,
    Qrels,
    Run,
    ShortRankingWarning,
    custom_gain,
    dcg_at_k,
    format_curve,
    format_interpolated,
    interpolated_curve,
    interpolated_precision,
    make_gain,
    parse_qrels,
    parse_run,
    pool,
    pool_all,
    pr_curve,
    precision_at_k,
    recall_at_k,
    write_qrels,
    write_run,
)


@pytest.fixture
def worked():
    run_text, qrels_text = worked_example_fixture()
    return parse_run(run_text)[0], parse_qrels(qrels_text)


def test_worked_precision_and_recall(worked):
    run, qrels = worked
    ranking = run.ranking("1")
    assert precision_at_k(ranking, qrels, "1", 10) == Fraction(8, 10)
    assert precision_at_k(ranking, qrels, "1", 5) == 1
    assert recall_at_k(ranking, qrels, "1", 10) == Fraction(8, 162)
    assert float(recall_at_k(ranking, qrels, "1", 10)) == pytest.approx(0.0494, abs=5e-5)


def test_fifty_results_twenty_relevant():
    docs = [f"d{i}" for i in range(50)]
    grades = {d: 1 for d in docs[:20]}
    grades.update({f"extra{i}": 1 for i in range(142)})
    qrels = Qrels.from_grades("1", grades)
    assert precision_at_k(docs, qrels, "1", 50) == Fraction(2, 5)
    assert recall_at_k(docs, qrels, "1", 50) == Fraction(20, 162)
    assert float(recall_at_k(docs, qrels, "1", 50)) == pytest.approx(0.1235, abs=1e-4)


def test_all_nonrelevant():
    qrels = Qrels.from_grades("1", {"x": 1})
    assert precision_at_k(["a", "b"], qrels, "1", 2) == 0


def test_retrieving_everything_gives_full_recall():
    qrels = Qrels.from_grades("1", {"a": 1, "b": 2, "c": 0})
    assert recall_at_k(["b", "c", "a"], qrels, "1", 3) == 1


def test_short_ranking_divides_by_k_and_warns():
    qrels = Qrels.from_grades("1", {"a": 1})
    with pytest.warns(ShortRankingWarning):
        assert precision_at_k(["a"], qrels, "1", 4) == Fraction(1, 4)


def test_recall_undefined_without_relevant():
    qrels = Qrels.from_grades("1", {"a": 0})
    with pytest.raises(UndefinedRecallError):
        recall_at_k(["a"], qrels, "1", 1)
    with pytest.raises(UndefinedRecallError):
        pr_curve(["a"], qrels, "1")


def test_curve_single_relevant():
    qrels = Qrels.from_grades("1", {"a": 1, "b": 1, "c": 1})
    curve = pr_curve(["a"], qrels, "1")
    assert [(p.k, p.recall, p.precision) for p in curve] == [(1, Fraction(1, 3), 1)]


THREE = Qrels.from_grades("1", {"a": 1, "c": 1})


def test_three_point_curve_and_interpolation():
    curve = pr_curve(["a", "b", "c"], THREE, "1")
    assert [(p.k, p.recall, p.precision) for p in curve] == [
        (1, Fraction(1, 2), 1),
        (2, Fraction(1, 2), Fraction(1, 2)),
        (3, 1, Fraction(2, 3)),
    ]
    assert interpolated_precision(curve, 0) == 1
    assert interpolated_precision(curve, 0.5) == 1
    assert interpolated_precision(curve, 1.0) == Fraction(2, 3)
    assert interpolated_precision(pr_curve(["a", "b"], THREE, "1"), 0.9) == 0


def test_recall_steps_of_one_over_r(worked):
    run, qrels = worked
    curve = pr_curve(run.ranking("1"), qrels, "1")
    steps = {b.recall - a.recall for a, b in zip(curve, curve[1:])}
    assert steps <= {0, Fraction(1, 162)}
    assert float(Fraction(1, 162)) == pytest.approx(0.006, abs=5e-4)


def test_eleven_point_grid_emission():
    curve = pr_curve(["a", "b", "c"], THREE, "1")
    grid = interpolated_curve(curve)
    assert [r for r, _ in grid] == list(ELEVEN_POINTS)
    assert [p for _, p in grid] == [1] * 6 + [Fraction(2, 3)] * 5
    assert format_interpolated(grid).splitlines()[0] == "0.0,1.000000"
    assert format_interpolated(grid).splitlines()[10] == "1.0,0.666667"
    assert format_curve(curve) == "1,0.500000,1.000000\n2,0.500000,0.500000\n3,1.000000,0.666667\n"
    assert interpolated_curve(curve, [0.5, 0.75]) == [(Fraction(1, 2), 1), (Fraction(3, 4), Fraction(2, 3))]


def test_gain_tables():
    assert make_gain("exponential", 5).table == (0, 1, 3, 7, 15)
    assert make_gain("linear", 3).table == (0, 1, 2)
    assert make_gain("exponential", 5)(0) == 0
    with pytest.raises(ConfigError):
        make_gain("quadratic", 3)
    with pytest.raises(ConfigError):
        make_gain("linear", 1)
    with pytest.raises(ConfigError):
        custom_gain((1, 2))
    with pytest.raises(ConfigError):
        custom_gain((0, 3, 2))
    assert custom_gain((0, 0.5, 4)).table == (0, 0.5, 4)


def test_discounts():
    log2 = DiscountSpec("log2")
    alt = DiscountSpec("log2max")
    assert [log2(k) for k in (1, 2, 3)] == [1.0, math.log2(3), 2.0]
    assert [alt(k) for k in (1, 2, 4)] == [1.0, 1.0, 2.0]
    for spec in (log2, alt, DiscountSpec("constant")):
        values = [spec(k) for k in range(1, 200)]
        assert all(v >= 1 for v in values)
        assert values == sorted(values)
    with pytest.raises(ConfigError):
        DiscountSpec("linear")


FIVE_POINT = Qrels.from_grades("1", {"p": 4, "g": 2, "z": 0}, grade_scale=4)


def test_dcg_examples():
    gain = make_gain("exponential", 5)
    disc = DiscountSpec("log2")
    assert dcg_at_k(["p"], FIVE_POINT, "1", 1, gain, disc) == 15.0
    assert dcg_at_k(["p", "g"], FIVE_POINT, "1", 2, gain, disc) == pytest.approx(16.8928, abs=5e-5)
    assert dcg_at_k(["p", "g"], FIVE_POINT, "1", 2, gain, disc) == 15 + 3 / math.log2(3)
    assert dcg_at_k(["z", "unjudged"], FIVE_POINT, "1", 2, gain, disc) == 0.0
    # defaults: exponential over the qrels scale, log2(k+1)
    assert dcg_at_k(["p"], FIVE_POINT, "1", 1) == 15.0


def test_pool_examples():
    one = Run({"1": (("A", 3), ("B", 2), ("C", 1))})
    two = Run({"1": (("B", 3), ("C", 2), ("D", 1))})
    assert pool([one], "1", 2) == {("1", "A"), ("1", "B")}
    assert len(pool([one, one], "1", 2)) == 2
    assert pool([Run({"1": (("A", 3), ("B", 2), ("C", 1))}), Run({"1": (("B", 3), ("C", 2), ("D", 1))})], "1", 2) == {
        ("1", "A"),
        ("1", "B"),
        ("1", "C"),
    }
    assert pool_all([one, two], 1) == [("1", "A"), ("1", "B")]
    with pytest.raises(ValueError):
        pool([one], "1", 0)


def test_format_parsing():
    q = parse_qrels("1 0 doc42 2\n")
    assert q.grade("1", "doc42") == 2 and q.grade_scale == 2
    runs = parse_run("1 Q0 doc42 1 9.5 sysA\n")
    assert runs[0].tag == "sysA" and runs[0].rankings == {"1": (("doc42", 9.5),)}


def test_run_sorted_by_rank_field_and_tags_split():
    runs = parse_run("1 Q0 b 2 1.0 x\n1 Q0 a 1 2.0 x\n1 Q0 c 1 5 y\n")
    assert [r.tag for r in runs] == ["x", "y"]
    assert runs[0].ranking("1") == ("a", "b")


@pytest.mark.parametrize(
    "text,err",
    [
        ("1 0 d\n", FormatError),
        ("1 0 d x\n", FormatError),
        ("1 0 d -1\n", FormatError),
        ("1 0 d 1\n1 0 d 2\n", DuplicateJudgmentError),
    ],
)
def test_bad_qrels(text, err):
    with pytest.raises(err):
        parse_qrels(text)


def test_bad_qrels_line_number():
    with pytest.raises(FormatError, match="line 2"):
        parse_qrels("1 0 a 1\n1 0 a 1\n")


@pytest.mark.parametrize(
    "text",
    ["1 Q0 d 1 2.0\n", "1 Q0 d one 2.0 t\n", "1 Q0 d 1 2 t\n1 Q0 d 2 1 t\n", "1 Q0 a 1 1 t\n1 Q0 b 2 5 t\n", "1 Q0 d 1 nan t\n"],
)
def test_bad_runs(text):
    with pytest.raises(FormatError):
        parse_run(text)


def test_qrels_write_round_trip():
    q = parse_qrels("2 7 b 1\n1 3 a 0\n10 0 c 2\n")
    assert write_qrels(q) == "1 0 a 0\n2 0 b 1\n10 0 c 2\n"
    assert parse_qrels(write_qrels(q)) == q


topic_ids = st.sampled_from(["1", "2", "10", "q7"])
doc_ids = st.text(alphabet="abcdefgh0123456789-", min_size=1, max_size=6)


@st.composite
def run_texts(draw):
    lines = []
    for topic in draw(st.sets(topic_ids, min_size=1)):
        docs = draw(st.lists(doc_ids, unique=True, min_size=1, max_size=8))
        scores = sorted(draw(st.lists(st.floats(-1e6, 1e6), min_size=len(docs), max_size=len(docs))), reverse=True)
        for rank, (d, s) in enumerate(zip(docs, scores), start=1):
            lines.append(f"{topic}   Q0 {d} {rank} {s!r} tagA")
    return "\n".join(draw(st.permutations(lines))) + "\n"


@settings(max_examples=200, deadline=None)
@given(run_texts())
def test_run_round_trip(text):
    parsed = parse_run(text)
    again = parse_run("".join(write_run(r) for r in parsed))
    assert again == parsed


@st.composite
def judged_rankings(draw):
    n = draw(st.integers(1, 30))
    grades = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    extra = draw(st.integers(0, 10))
    docs = [f"d{i}" for i in range(n)]
    judg = {d: g for d, g in zip(docs, grades)}
    judg.update({f"x{i}": 1 for i in range(extra)})
    return docs, Qrels.from_grades("t", judg, grade_scale=3)


@settings(max_examples=300, deadline=None)
@given(judged_rankings())
def test_measure_properties(data):
    docs, qrels = data
    n = len(docs)
    total = qrels.relevant_count("t")
    gain = make_gain("exponential", 4)
    dcgs = [dcg_at_k(docs, qrels, "t", k, gain) for k in range(1, n + 1)]
    assert all(b >= a for a, b in zip(dcgs, dcgs[1:]))
    binary = Qrels({k: min(g, 1) for k, g in qrels.judgments.items()}, 1)
    for k in range(1, n + 1):
        p = precision_at_k(docs, binary, "t", k)
        assert dcg_at_k(docs, binary, "t", k, make_gain("linear", 2), DiscountSpec("constant")) == k * p
    if total == 0:
        return
    curve = pr_curve(docs, qrels, "t")
    for p in curve:
        assert p.precision * p.k == p.recall * total
        assert p.precision == precision_at_k(docs, qrels, "t", p.k)
        assert p.recall == recall_at_k(docs, qrels, "t", p.k)
    assert all(b.recall >= a.recall for a, b in zip(curve, curve[1:]))
    levels = [Fraction(i, 20) for i in range(21)]
    ip = [interpolated_precision(curve, r) for r in levels]
    assert all(b <= a for a, b in zip(ip, ip[1:]))
    for r in levels:
        first = next((p for p in curve if p.recall >= r), None)
        if first is not None:
            assert interpolated_precision(curve, r) >= first.precision


def test_run_invariants_enforced():
    with pytest.raises(ValueError):
        Run({"1": (("a", 1.0), ("a", 0.5))})
    with pytest.raises(ValueError):
        Run({"1": (("a", 1.0), ("b", 2.0))})


def test_measures_are_pure(worked):
    run, qrels = worked
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        a = [precision_at_k(run.ranking("1"), qrels, "1", k) for k in range(1, 11)]
    b = [precision_at_k(run.ranking("1"), qrels, "1", k) for k in range(1, 11)]
    assert a == b
