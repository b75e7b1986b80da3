import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_dempster, brute_pl, random_mass
from fastmobius.counters import OpCounter
from fastmobius.errors import FrameMismatch, InvalidBBA, TotalConflict
from fastmobius.evidence import (
    CombinationResult,
    combine_to_plausibility,
    dempster,
    dempster_fast,
    dempster_naive,
    normalize,
)
from fastmobius.setfun import Frame, Kind, SetFunction, validate_bba
from fastmobius.transforms import fmt_mass_to_q


def test_vacuous_with_vacuous(abc):
    v = SetFunction.vacuous(abc)
    for combine in (dempster_naive, dempster_fast):
        r = combine(v, v)
        assert r.combined.values.tolist() == v.values.tolist()
        assert r.conflict == 0.0


def test_disjoint_point_masses(abc):
    m1 = SetFunction.from_subsets(abc, {"a": 1.0})
    m2 = SetFunction.from_subsets(abc, {"b": 1.0})
    for combine in (dempster_naive, dempster_fast):
        r = combine(m1, m2)
        assert r.conflict == pytest.approx(1.0, abs=1e-15)
        assert r.combined.values[0] == pytest.approx(1.0, abs=1e-15)


def test_naive_counts_n5():
    frame = Frame.of_size(5)
    c = OpCounter()
    dempster_naive(SetFunction.vacuous(frame), SetFunction.vacuous(frame), counter=c)
    assert c.multiplications == 1024
    assert c.additions == 32 * 31


@pytest.mark.parametrize("n", range(1, 6))
def test_naive_matches_brute_force(n, rng):
    frame = Frame.of_size(n)
    m1, m2 = random_mass(frame, rng), random_mass(frame, rng)
    expected = brute_dempster(list(m1.values), list(m2.values), n)
    np.testing.assert_allclose(dempster_naive(m1, m2).combined.values, expected, atol=1e-14)


@pytest.mark.parametrize("n", range(1, 9))
def test_fast_matches_naive(n, rng):
    frame = Frame.of_size(n)
    for _ in range(10):
        m1, m2 = random_mass(frame, rng), random_mass(frame, rng)
        assert dempster_fast(m1, m2).combined.allclose(dempster_naive(m1, m2).combined, 1e-10)


def test_vacuous_is_identity(rng):
    frame = Frame.of_size(6)
    m = random_mass(frame, rng)
    r = dempster_fast(m, SetFunction.vacuous(frame))
    assert r.combined.allclose(m, 1e-12)
    assert dempster_naive(m, SetFunction.vacuous(frame)).combined.allclose(m, 1e-12)


def _triples(seed, n):
    rng = np.random.default_rng(seed)
    frame = Frame.of_size(n)
    return [random_mass(frame, rng) for _ in range(3)]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_commutative_and_associative(seed, n):
    a, b, c = _triples(seed, n)
    ab = dempster_fast(a, b).combined
    assert ab.allclose(dempster_fast(b, a).combined, 1e-10)
    left = dempster_fast(ab, c).combined
    right = dempster_fast(a, dempster_fast(b, c).combined).combined
    assert left.allclose(right, 1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 7))
def test_commonality_of_combination_is_product(seed, n):
    a, b, _ = _triples(seed, n)
    q = fmt_mass_to_q(dempster_naive(a, b).combined).values
    np.testing.assert_allclose(q, fmt_mass_to_q(a).values * fmt_mass_to_q(b).values, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 7))
def test_combined_valid_bbas_stay_valid(seed, n):
    a, b, _ = _triples(seed, n)
    combined = dempster_fast(a, b).combined
    assert (combined.values >= -1e-12).all()
    assert abs(combined.values.sum() - 1.0) < 1e-9


def test_frame_mismatch():
    with pytest.raises(FrameMismatch):
        dempster_fast(SetFunction.vacuous(Frame(["a", "b"])), SetFunction.vacuous(Frame(["a", "c"])))
    with pytest.raises(FrameMismatch):
        combine_to_plausibility(SetFunction.vacuous(Frame(["a"])), SetFunction.vacuous(Frame(["a", "b"])))


def test_strict_rejects_invalid(abc):
    bad = SetFunction.from_subsets(abc, {"a": 0.7})
    with pytest.raises(InvalidBBA):
        dempster_naive(bad, SetFunction.vacuous(abc), strict=True)
    dempster_naive(bad, SetFunction.vacuous(abc))


def test_dispatch(abc):
    v = SetFunction.vacuous(abc)
    assert dempster(v, v, "naive").combined.allclose(v)
    with pytest.raises(ValueError):
        dempster(v, v, "slow")


def test_pipeline_vacuous(abc):
    v = SetFunction.vacuous(abc)
    for algo in ("fast", "naive"):
        pl = combine_to_plausibility(v, v, algo)
        assert pl.kind is Kind.PLAUSIBILITY
        assert pl.values.tolist() == [0] + [1] * 7


def test_pipeline_example():
    frame = Frame(["a", "b"])
    m1 = SetFunction.from_subsets(frame, {"a": 1.0})
    m2 = SetFunction.vacuous(frame)
    for algo in ("fast", "naive"):
        assert combine_to_plausibility(m1, m2, algo).values.tolist() == [0.0, 1.0, 0.0, 1.0]


@pytest.mark.parametrize("n", range(1, 9))
def test_pipeline_fast_matches_slow(n, rng):
    frame = Frame.of_size(n)
    for _ in range(5):
        m1, m2 = random_mass(frame, rng), random_mass(frame, rng)
        fast = combine_to_plausibility(m1, m2, "fast")
        slow = combine_to_plausibility(m1, m2, "naive")
        assert fast.allclose(slow, 1e-10)
        if n <= 5:
            combined = brute_dempster(list(m1.values), list(m2.values), n)
            np.testing.assert_allclose(fast.values, brute_pl(combined, n), atol=1e-10)


def test_pipeline_count_ratio_n5(rng):
    frame = Frame.of_size(5)
    m1, m2 = random_mass(frame, rng), random_mass(frame, rng)
    slow, fast = OpCounter(), OpCounter()
    combine_to_plausibility(m1, m2, "naive", slow)
    combine_to_plausibility(m1, m2, "fast", fast)
    assert int(slow.additions / fast.additions) == 5
    assert slow.multiplications // fast.multiplications == 32


def test_fast_counts(rng):
    n = 6
    frame = Frame.of_size(n)
    c = OpCounter()
    dempster_fast(random_mass(frame, rng), random_mass(frame, rng), counter=c)
    sections = c.by_section()
    assert sections["X"] == (n * 2**n, 0)
    assert sections["Y"] == (0, 2**n)
    assert sections["inverse"] == (n * 2 ** (n - 1), 0)


def test_normalize_no_conflict(abc):
    v = SetFunction.vacuous(abc)
    r = normalize(dempster_fast(v, v))
    assert r.normalized
    assert r.combined.values.tolist() == v.values.tolist()


def test_normalize_half_conflict(abc):
    combined = SetFunction.from_subsets(abc, {"": 0.5, "a": 0.5})
    r = normalize(CombinationResult.unnormalized(combined))
    assert r.combined["a"] == 1.0 and r.combined[""] == 0.0
    assert r.conflict == 0.5
    assert validate_bba(r.combined, exclude_empty=True)


def test_normalize_total_conflict(abc):
    m1 = SetFunction.from_subsets(abc, {"a": 1.0})
    m2 = SetFunction.from_subsets(abc, {"b": 1.0})
    with pytest.raises(TotalConflict):
        normalize(dempster_fast(m1, m2))
