import math

import pytest
from hypothesis import given, settings, strategies as st

from qpbfix.comparison import (CONVERGENT, DIVERGENT, INCONCLUSIVE, ComparisonFn, psi_iterate,
                               validate_monotone, validate_series, validate_strict_contraction)
from qpbfix.space import EvaluationError

SIXTH = ComparisonFn(lambda t: t / 6, 2.0)


def test_monotone_psi_sixth():
    grid = [k / 10 for k in range(101)]
    assert validate_monotone(SIXTH, grid).passed


def test_monotone_negative_identity():
    rep = validate_monotone(ComparisonFn(lambda t: -t), [0.0, 1.0, 2.0])
    assert not rep.passed
    assert (0.0, 1.0) in [w.points for w in rep.witnesses]


def test_monotone_sine_fails_after_half_pi():
    grid = [k / 10 for k in range(32)]  # 0 .. 3.1
    rep = validate_monotone(ComparisonFn(math.sin), grid)
    expected = {(a, b) for a, b in zip(grid, grid[1:]) if math.sin(b) < math.sin(a)}
    assert {w.points for w in rep.witnesses} == expected
    assert min(a for a, _ in expected) >= 1.5  # the first drop is across pi/2


def test_monotone_requires_sorted():
    with pytest.raises(ValueError):
        validate_monotone(SIXTH, [1.0, 0.0])


def test_series_geometric_closed_form():
    ev = validate_series(SIXTH, 1.5, j_max=50)
    assert ev.verdict == CONVERGENT
    # terms 1.5 * (1/3)^i, so the limit is 1.5 / (1 - 1/3) = 9/4
    assert ev.partial_sums[-1] == pytest.approx(2.25, abs=1e-9)
    assert all(r == pytest.approx(1 / 3, rel=1e-12) for r in ev.term_ratios)
    for j, v in enumerate(ev.partial_sums):
        assert v == pytest.approx(1.5 * (1 - (1 / 3) ** (j + 1)) / (2 / 3), rel=1e-12)


def test_series_identity_diverges():
    ev = validate_series(ComparisonFn(lambda t: t, 1.0), 1.0)
    assert ev.verdict == DIVERGENT
    assert ev.partial_sums[:3] == [1.0, 2.0, 3.0]


def test_series_zero_start():
    ev = validate_series(SIXTH, 0.0)
    assert ev.verdict == CONVERGENT
    assert ev.partial_sums[-1] == 0.0


def test_series_slow_ratio_inconclusive():
    # ratio 0.9 < 0.95 but the tail is far from flat after 64 terms
    ev = validate_series(ComparisonFn(lambda t: 0.9 * t, 1.0), 1.0)
    assert ev.verdict == INCONCLUSIVE


def test_series_json_shape():
    d = validate_series(SIXTH, 1.5).to_dict()
    assert set(d) == {"t", "s", "partial_sums", "term_ratios", "verdict"}
    assert len(d["partial_sums"]) == 65


def test_series_non_finite():
    with pytest.raises(EvaluationError):
        validate_series(ComparisonFn(lambda t: t * 1e200, 1.0), 1e200)


def test_strict_contraction():
    assert validate_strict_contraction(SIXTH, [0.1, 1.0, 100.0]).passed
    rep = validate_strict_contraction(ComparisonFn(lambda t: t), [0.5, 1.0, 2.0])
    assert {w.points for w in rep.witnesses} == {(0.5,), (1.0,), (2.0,)}
    assert validate_strict_contraction(ComparisonFn(lambda t: t / (1 + t)), [0.5, 1, 2]).passed
    with pytest.raises(ValueError):
        validate_strict_contraction(SIXTH, [0.0])


def test_psi_iterate_examples():
    assert psi_iterate(SIXTH, 1.5, 2) == pytest.approx(1 / 24, rel=1e-15)
    assert psi_iterate(ComparisonFn(math.sqrt), 7.0, 0) == 7.0
    assert psi_iterate(SIXTH, 0.0, 5) == 0.0


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1e6, allow_nan=False), st.integers(0, 20), st.integers(0, 20))
def test_psi_iterate_composes(t, m, n):
    assert psi_iterate(SIXTH, t, m + n) == psi_iterate(SIXTH, psi_iterate(SIXTH, t, n), m)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-6, 1e6, allow_nan=False), st.integers(0, 30))
def test_psi_iterate_closed_form_and_decreasing(t, n):
    assert validate_strict_contraction(SIXTH, [t]).passed
    assert psi_iterate(SIXTH, t, n) == pytest.approx(t / 6 ** n, rel=1e-12)
    assert psi_iterate(SIXTH, t, n + 1) <= psi_iterate(SIXTH, t, n)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 100, allow_nan=False))
def test_series_matches_geometric_limit(t):
    ev = validate_series(SIXTH, t, j_max=50)
    assert ev.partial_sums[-1] == pytest.approx(t * 1.5, abs=1e-9)
