import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from qpbfix.catalog import X, example1_q, in_A, in_B, standard_metric
from qpbfix.space import (DqSpace, Domain, EvaluationError, QpbSpace, Region, Separation,
                          check_dq_axioms, check_qpb_axioms, closed_ball, contains_center,
                          left_closed_ball, lemma1_separation)

EX1 = QpbSpace(example1_q, 2.0)


def test_domain_sampler_respects_open_endpoints():
    grid = X.sample(10)
    assert 0.0 in grid.points and 4.0 in grid.points
    assert 5.0 not in grid.points
    assert all(p in X for p in grid)
    b = Domain.interval(4.0, 5.0, False, False).sample(7)
    assert 4.0 not in b.points and 5.0 not in b.points
    assert all(4 < p < 5 for p in b)


def test_closed_endpoint_kept_off_lattice():
    pts = Domain.interval(0.05, 1.0).sample(10).points
    assert pts[0] == 0.05 and pts[-1] == 1.0


def test_region_dedup_and_nonempty():
    r = Region.from_values([1.0, 1.0 + 1e-12, 0.5])
    assert r.points == (0.5, 1.0)
    with pytest.raises(ValueError):
        Region.from_values([])


def test_space_rejects_small_coefficient():
    with pytest.raises(ValueError):
        QpbSpace(standard_metric, 0.5)


@pytest.mark.parametrize("resolution", [11, 41])
def test_example1_axioms_hold_with_s2(resolution):
    rep = check_qpb_axioms(EX1, X.sample(resolution))
    assert rep.passed and rep.witnesses == []


def test_example1_axioms_fifty_point_grid():
    rep = check_qpb_axioms(EX1, X.sample(10))
    assert len(X.sample(10)) == 50 and rep.passed


def test_example1_s1_bbb_witness():
    rep = check_qpb_axioms(QpbSpace(example1_q, 1.0), Region.from_values([4.1, 4.9, 4.5]))
    w = [w for w in rep.witnesses if w.points == (4.1, 4.9, 4.5)]
    assert len(w) == 1
    # |4.1-4.9|^2 = 0.64 against (0.16 + 0.16) - 0
    assert w[0].lhs == pytest.approx(0.64, abs=1e-12)
    assert w[0].rhs == pytest.approx(0.32, abs=1e-12)
    assert w[0].margin == pytest.approx(0.32, abs=1e-12)
    assert w[0].clause == "axiom4"


def test_example1_tight_below_coefficient():
    grid = X.sample(11)
    assert not check_qpb_axioms(QpbSpace(example1_q, 1.95), grid).passed
    assert check_qpb_axioms(QpbSpace(example1_q, 2.0), grid).passed


def test_standard_metric_passes():
    grid = Domain.interval(-2.0, 2.0).sample(5)
    assert check_qpb_axioms(QpbSpace(standard_metric, 1.0), grid).passed
    assert check_dq_axioms(DqSpace(standard_metric), grid).passed


def test_non_finite_distance_is_an_error():
    space = QpbSpace(lambda x, y: math.inf if x == y == 0.5 else abs(x - y))
    with pytest.raises(EvaluationError, match="0.5"):
        check_qpb_axioms(space, Region.from_values([0.0, 0.5]))


def test_witnesses_sorted_by_margin_and_json_shape():
    rep = check_qpb_axioms(QpbSpace(example1_q, 1.0), X.sample(5))
    margins = [w.margin for w in rep.witnesses]
    assert margins == sorted(margins, reverse=True)
    d = rep.to_dict()
    assert set(d) >= {"predicate", "passed", "checked", "witnesses"}
    assert set(d["witnesses"][0]) >= {"points", "lhs", "rhs", "margin"}
    assert all(w["margin"] > 1e-12 for w in d["witnesses"])


def test_limit_keeps_largest_and_full_count():
    space = QpbSpace(example1_q, 1.0)
    full = check_qpb_axioms(space, X.sample(5))
    capped = check_qpb_axioms(space, X.sample(5), limit=3)
    assert capped.violations == full.violations == len(full.witnesses)
    assert [w.margin for w in capped.witnesses] == [w.margin for w in full.witnesses[:3]]


def test_dq_first_argument_only():
    space = DqSpace(lambda x, y: x)
    grid = Domain.interval(0.0, 1.0).sample(4)
    rep = check_dq_axioms(space, grid)
    assert oracles.same(rep, oracles.dq_axioms(space.dist, grid.points))
    # direct scan: (i) needs x = 0 and y = 0, so never fires for distinct points;
    # (ii) x <= x + z - z always holds
    assert rep.passed


def test_dq_example1_on_b_interior():
    grid = Domain.interval(4.0, 5.0, False, False).sample(10)
    rep = check_dq_axioms(DqSpace(example1_q), grid)
    expected = oracles.dq_axioms(example1_q, grid.points)
    assert oracles.same(rep, expected)
    # squared gaps break the plain triangle inequality at midpoints
    assert ("ii", (4.1, 4.9, 4.5)) in oracles.as_dict(rep)


def test_left_ball_example1_equals_A():
    grid = X.sample(41)
    ball = left_closed_ball(EX1, 0.5, 4.5, grid)
    assert ball.points == tuple(p for p in grid if p <= 4.0)
    assert ball.source.value == "materialized-ball"


def test_left_ball_radius_one():
    grid = X.sample(10)
    ball = left_closed_ball(EX1, 0.5, 1.0, grid)
    assert ball.points == (0.5,)
    expected = tuple(y for y in grid if example1_q(0.5, y) <= 1.0)
    assert ball.points == expected


def test_left_ball_radius_zero_metric():
    ball = left_closed_ball(QpbSpace(standard_metric), 0.3, 0.0, Domain.interval(0, 1).sample(10))
    assert ball.points == (0.3,)


def test_closed_ball_metric():
    grid = Domain.interval(-2.0, 2.0).sample(10)
    ball = closed_ball(QpbSpace(standard_metric), 0.0, 1.0, grid)
    assert ball.points == tuple(p for p in grid if -1 <= p <= 1)


def test_closed_ball_example1():
    grid = X.sample(10)
    ball = closed_ball(EX1, 0.5, 4.5, grid)
    # max{2y, 0.5} + y <= 4.5 on A gives y <= 1.5
    assert ball.points == tuple(p for p in grid if p <= 1.5)


def test_ball_excludes_center_when_self_distance_large():
    ball = left_closed_ball(EX1, 2.0, 1.0, X.sample(10))
    assert not contains_center(ball, 2.0)


def test_lemma1():
    assert lemma1_separation(EX1, 0.0, 0.0) is Separation.IDENTIFIED
    assert EX1.q(1.0, 3.0) == 4.0
    assert lemma1_separation(EX1, 1.0, 3.0) is Separation.SEPARATED
    half = QpbSpace(lambda x, y: 0.5e-9)
    assert lemma1_separation(half, 1.0, 2.0) is Separation.IDENTIFIED


def test_lemma1_diagonal_identified_on_zero_and_B():
    grid = X.sample(10)
    ident = [x for x in grid if lemma1_separation(EX1, x, x) is Separation.IDENTIFIED]
    assert ident == [x for x in grid if x == 0.0 or in_B(x)]


@pytest.mark.parametrize("res", [3, 5])
def test_axiom_checker_matches_naive_scan(res):
    for s in (1.0, 1.5, 2.0):
        space = QpbSpace(example1_q, s)
        grid = X.sample(res)
        rep = check_qpb_axioms(space, grid)
        assert oracles.same(rep, oracles.qpb_axioms(example1_q, s, grid.points))


centers = st.sampled_from(X.sample(4).points)
radii = st.floats(0, 15, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(centers, radii, radii)
def test_ball_properties(c, r1, r2):
    grid = X.sample(4)
    lo, hi = min(r1, r2), max(r1, r2)
    small, big = left_closed_ball(EX1, c, lo, grid), left_closed_ball(EX1, c, hi, grid)
    assert set(small.points) <= set(big.points)
    assert set(closed_ball(EX1, c, hi, grid).points) <= set(big.points)
    assert set(closed_ball(EX1, c, lo, grid).points) <= set(closed_ball(EX1, c, hi, grid).points)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=1, max_size=6))
def test_standard_metric_never_fails(ticks):
    # points well apart relative to the zero tolerance
    region = Region.from_values(k / 10 for k in ticks)
    assert check_qpb_axioms(QpbSpace(standard_metric, 1.0), region).passed


def test_matrix_is_exact_evaluation():
    pts = X.sample(2).points
    Q = EX1.matrix(pts)
    assert np.array_equal(Q, [[example1_q(a, b) for b in pts] for a in pts])
    assert all(in_A(p) or in_B(p) for p in pts)
