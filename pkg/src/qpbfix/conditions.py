"""Scenario definition and the three contraction hypotheses for a map pair (U, V).

The contraction inequality only applies to pairs that pass the dominance
guard; skipped pairs are counted so a vacuous pass is visible in reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .comparison import (CONVERGENT, ComparisonFn, validate_monotone, validate_series,
                         validate_strict_contraction)
from .dominance import DominancePair, dominance_guard, is_locally_dominated, is_pair_triangular
from .space import (DEFAULT_TOL, Domain, DomainError, EvaluationError, QpbSpace, Region,
                    Tolerances, ViolationReport, _collect, check_qpb_axioms, left_closed_ball)

Map = Callable[[float], float]


@dataclass(frozen=True)
class Scenario:
    space: QpbSpace
    U: Map
    V: Map
    dominance: DominancePair
    psi: ComparisonFn
    x0: float
    epsilon: float
    domain: Domain
    name: str = ""
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.x0 not in self.domain:
            raise DomainError("x0=%r is outside the domain %s" % (self.x0, self.domain))
        if self.space.s != self.psi.claimed_s:
            raise ValueError("space coefficient s=%r differs from psi's claimed s=%r"
                             % (self.space.s, self.psi.claimed_s))

    def q(self, x, y) -> float:
        return self.space.q(x, y)

    def apply(self, which: str, x: float) -> float:
        y = (self.U if which == "U" else self.V)(x)
        if not math.isfinite(y) or y not in self.domain:
            raise DomainError("%s(%r) = %r is outside the domain %s"
                              % (which, x, y, self.domain))
        return float(y)

    def ball(self, resolution: int, tol: Tolerances = DEFAULT_TOL) -> Region:
        """Left closed ball around x0, sampled at ``resolution`` points per unit.

        x0 itself is added to the candidate grid.
        """
        grid = self.domain.sample(resolution).union([self.x0])
        return left_closed_ball(self.space, self.x0, self.epsilon, grid, tol)


def m_s(sc: Scenario, x: float, y: float) -> float:
    """max{q(x,y), q(x,Ux), q(y,Vy), [q(x,Vy) + q(y,Ux) - q(x,x)] / 2s}."""
    ux, vy = sc.apply("U", x), sc.apply("V", y)
    q = sc.q
    cross = (q(x, vy) + q(y, ux) - q(x, x)) / (2 * sc.space.s)
    return max(q(x, y), q(x, ux), q(y, vy), cross)


def check_condition_1(sc: Scenario, region: Region, tol: Tolerances = DEFAULT_TOL,
                      limit: int | None = None) -> ViolationReport:
    """max{q(Ux,Vy), q(Vy,Ux)} <= psi(M_s(x,y)) on guard-passing ordered pairs."""
    pts = list(region)
    U = {x: sc.apply("U", x) for x in pts}
    V = {y: sc.apply("V", y) for y in pts}
    wpts, lhs, rhs = [], [], []
    skipped = 0
    for x in pts:
        for y in pts:
            if not dominance_guard(sc.dominance, x, y, tol):
                skipped += 1
                continue
            left = max(sc.q(U[x], V[y]), sc.q(V[y], U[x]))
            right = sc.psi(m_s(sc, x, y))
            if left > right + tol.slack:
                wpts.append((x, y))
                lhs.append(left)
                rhs.append(right)
    chunks = [(np.array(wpts), np.array(lhs), np.array(rhs), "condition1")] if wpts else []
    return _collect("condition1", len(pts) ** 2 - skipped, chunks, limit,
                    skipped=skipped, region=region.source.value)


def check_condition_2(sc: Scenario, region: Region, tol: Tolerances = DEFAULT_TOL,
                      limit: int | None = None) -> ViolationReport:
    """q(Vy, Ux) <= q(x, y) on every ordered pair."""
    pts = list(region)
    U = {x: sc.apply("U", x) for x in pts}
    V = {y: sc.apply("V", y) for y in pts}
    wpts, lhs, rhs = [], [], []
    for x in pts:
        for y in pts:
            left, right = sc.q(V[y], U[x]), sc.q(x, y)
            if left > right + tol.slack:
                wpts.append((x, y))
                lhs.append(left)
                rhs.append(right)
    chunks = [(np.array(wpts), np.array(lhs), np.array(rhs), "condition2")] if wpts else []
    return _collect("condition2", len(pts) ** 2, chunks, limit, region=region.source.value)


@dataclass
class RadiusEvidence:
    t0: float
    bound: float
    partial_sums: list[float]
    passed: bool
    first_failure: int | None = None

    def to_dict(self) -> dict:
        return {"t0": self.t0, "bound": self.bound, "partial_sums": self.partial_sums,
                "passed": self.passed, "first_failure": self.first_failure}


def check_condition_3(sc: Scenario, j_max: int = 64, tol: Tolerances = DEFAULT_TOL
                      ) -> RadiusEvidence:
    """Partial sums of s^(i+1) psi^i(t0) against epsilon, t0 the larger x0/Ux0 distance."""
    if j_max < 0:
        raise ValueError("j_max must be >= 0")
    x0 = sc.x0
    ux0 = sc.apply("U", x0)
    t0 = max(sc.q(x0, ux0), sc.q(ux0, x0))
    s = sc.space.s
    sums, acc, p = [], 0.0, t0
    for i in range(j_max + 1):
        acc += s ** (i + 1) * p
        sums.append(acc)
        p = sc.psi(p)
    fail = next((j for j, v in enumerate(sums) if v > sc.epsilon + tol.slack), None)
    return RadiusEvidence(t0, sc.epsilon, sums, fail is None, fail)


@dataclass
class CompositeReport:
    scenario: str
    ball_size: int
    axioms: ViolationReport
    dominance_U: ViolationReport
    dominance_V: ViolationReport
    triangular: ViolationReport
    psi: dict
    cond1: ViolationReport
    cond2: ViolationReport
    cond3: RadiusEvidence

    @property
    def passed(self) -> bool:
        reports = (self.axioms, self.dominance_U, self.dominance_V, self.triangular,
                   self.psi["monotone"], self.psi["strict_contraction"],
                   self.cond1, self.cond2)
        return (all(r.passed for r in reports) and self.cond3.passed
                and self.psi["series"].verdict == CONVERGENT)

    @property
    def verdict(self) -> str:
        return "passed" if self.passed else "failed"

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "ball_size": self.ball_size,
            "axioms": self.axioms.to_dict(),
            "dominance_U": self.dominance_U.to_dict(),
            "dominance_V": self.dominance_V.to_dict(),
            "triangular": self.triangular.to_dict(),
            "psi": {k: v.to_dict() for k, v in self.psi.items()},
            "cond1": self.cond1.to_dict(),
            "cond2": self.cond2.to_dict(),
            "cond3": self.cond3.to_dict(),
            "verdict": self.verdict,
        }


def psi_grid(sc: Scenario, ball: Region, points: int = 201) -> list[float]:
    """Nonnegative test grid for psi, spanning the distances seen on the ball."""
    top = 1.0
    for x in ball:
        for y in (ball.points[0], ball.points[-1], x):
            top = max(top, sc.q(x, y), sc.q(y, x))
    return [top * k / (points - 1) for k in range(points)]


def check_all(sc: Scenario, resolution: int = 41, j_max: int = 64,
              tol: Tolerances = DEFAULT_TOL, limit: int | None = None) -> CompositeReport:
    """Materialize the ball and run every hypothesis check on it."""
    ball = sc.ball(resolution, tol)
    if not len(ball):
        raise EvaluationError("left closed ball around x0 contains no grid points")
    grid = psi_grid(sc, ball)
    x0 = sc.x0
    ux0 = sc.apply("U", x0)
    t0 = max(sc.q(x0, ux0), sc.q(ux0, x0))
    psi = {
        "monotone": validate_monotone(sc.psi, grid, tol),
        "series": validate_series(sc.psi, t0, j_max, tol=tol),
        "strict_contraction": validate_strict_contraction(sc.psi, grid[1:], tol),
    }
    return CompositeReport(
        scenario=sc.name,
        ball_size=len(ball),
        axioms=check_qpb_axioms(sc.space, ball, tol, limit=limit),
        dominance_U=is_locally_dominated(sc.dominance, lambda x: sc.apply("U", x), ball,
                                         tol, limit=limit, name="U"),
        dominance_V=is_locally_dominated(sc.dominance, lambda x: sc.apply("V", x), ball,
                                         tol, limit=limit, name="V"),
        triangular=is_pair_triangular(sc.dominance, ball, tol, limit=limit),
        psi=psi,
        cond1=check_condition_1(sc, ball, tol, limit=limit),
        cond2=check_condition_2(sc, ball, tol, limit=limit),
        cond3=check_condition_3(sc, j_max, tol),
    )


__all__ = ["Scenario", "m_s", "check_condition_1", "check_condition_2", "check_condition_3",
           "check_all", "CompositeReport", "RadiusEvidence"]
