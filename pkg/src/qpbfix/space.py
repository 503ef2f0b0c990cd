"""Quasi-partial b-metric spaces, dislocated quasi-metrics and balls.

Axioms are universally quantified over the whole space, so everything here
works on finite :class:`Region` samples and returns every witness found.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

Point = float
Distance = Callable[[float, float], float]


class EvaluationError(ValueError):
    """A distance or map produced a value the checkers cannot use."""


class DomainError(EvaluationError):
    """A point (usually a map image) lies outside the scenario domain."""


@dataclass(frozen=True)
class Tolerances:
    eq: float = 1e-9  # point identity
    zero: float = 1e-9  # q-distance counted as zero
    slack: float = 1e-12  # inequality slack against rounding


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __contains__(self, x: float) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def __str__(self) -> str:
        return "%s%g, %g%s" % ("[" if self.lo_closed else "(", self.lo, self.hi,
                               "]" if self.hi_closed else ")")

    def sample(self, resolution: int) -> list[float]:
        # lattice k/resolution; open endpoints dropped, closed ones always kept
        k0 = math.ceil(self.lo * resolution - 1e-9)
        k1 = math.floor(self.hi * resolution + 1e-9)
        pts = [k / resolution for k in range(k0, k1 + 1)]
        pts = [p for p in pts if p in self]
        if self.lo_closed and (not pts or pts[0] != self.lo):
            pts.insert(0, float(self.lo))
        if self.hi_closed and (not pts or pts[-1] != self.hi):
            pts.append(float(self.hi))
        return pts


@dataclass(frozen=True)
class Domain:
    """A finite union of real intervals."""

    intervals: tuple[Interval, ...]

    @classmethod
    def interval(cls, lo, hi, lo_closed=True, hi_closed=True) -> "Domain":
        return cls((Interval(lo, hi, lo_closed, hi_closed),))

    def __contains__(self, x: float) -> bool:
        return any(x in iv for iv in self.intervals)

    def __str__(self) -> str:
        return " U ".join(str(iv) for iv in self.intervals)

    def sample(self, resolution: int) -> "Region":
        if resolution < 1:
            raise ValueError("resolution must be a positive integer")
        pts: list[float] = []
        for iv in self.intervals:
            pts.extend(iv.sample(resolution))
        return Region.from_values(pts, source="explicit-grid")


class RegionSource(str, Enum):
    GRID = "explicit-grid"
    BALL = "materialized-ball"


@dataclass(frozen=True)
class Region:
    points: tuple[float, ...]
    source: RegionSource = RegionSource.GRID

    @classmethod
    def from_values(cls, values: Iterable[float], source="explicit-grid",
                    tol: float = DEFAULT_TOL.eq, allow_empty=False) -> "Region":
        """Sort, deduplicate under ``tol`` and freeze ``values``."""
        out: list[float] = []
        for v in sorted(float(v) for v in values):
            if not out or v - out[-1] > tol:
                out.append(v)
        if not out and not allow_empty:
            raise ValueError("region must be nonempty")
        return cls(tuple(out), RegionSource(source))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def union(self, other: Iterable[float], tol: float = DEFAULT_TOL.eq) -> "Region":
        return Region.from_values([*self.points, *other], self.source, tol)


@dataclass(frozen=True)
class QpbSpace:
    """Distance ``dist`` with b-triangle coefficient ``s``."""

    dist: Distance
    s: float = 1.0
    name: str = ""

    def __post_init__(self):
        if not self.s >= 1:
            raise ValueError("coefficient s must be >= 1, got %r" % (self.s,))

    def q(self, x: float, y: float) -> float:
        v = self.dist(x, y)
        if not math.isfinite(v):
            raise EvaluationError("non-finite distance q(%r, %r) = %r" % (x, y, v))
        return float(v)

    def matrix(self, points: Sequence[float]) -> np.ndarray:
        """``Q[i, j] = q(points[i], points[j])``."""
        n = len(points)
        Q = np.empty((n, n))
        for i, x in enumerate(points):
            for j, y in enumerate(points):
                Q[i, j] = self.q(x, y)
        return Q


@dataclass(frozen=True)
class DqSpace:
    dist: Distance
    name: str = ""

    q = QpbSpace.q
    matrix = QpbSpace.matrix


@dataclass(frozen=True)
class Witness:
    points: tuple[float, ...]
    lhs: float
    rhs: float
    clause: str = ""

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    def to_dict(self) -> dict:
        d = {"points": list(self.points), "lhs": self.lhs, "rhs": self.rhs,
             "margin": self.margin}
        if self.clause:
            d["clause"] = self.clause
        return d


@dataclass
class ViolationReport:
    """Outcome of checking one predicate over a finite region.

    ``witnesses`` is sorted by descending margin and may be capped by the
    caller; ``violations`` always holds the full count.
    """

    predicate: str
    checked: int
    witnesses: list[Witness] = field(default_factory=list)
    violations: int | None = None
    skipped: int = 0
    region: str = ""

    def __post_init__(self):
        self.witnesses.sort(key=lambda w: -w.margin)
        if self.violations is None:
            self.violations = len(self.witnesses)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def to_dict(self) -> dict:
        d = {"predicate": self.predicate, "passed": self.passed,
             "checked": self.checked,
             "witnesses": [w.to_dict() for w in self.witnesses]}
        if self.violations != len(self.witnesses):
            d["violations"] = self.violations
        if self.skipped:
            d["skipped"] = self.skipped
        if self.region:
            d["region"] = self.region
        return d


def _collect(predicate, checked, chunks, limit, **kw) -> ViolationReport:
    """Build a report from ``(points, lhs, rhs, clause)`` chunk arrays.

    Chunks arrive in enumeration order; a stable sort on margin keeps that
    order among ties before truncating to ``limit``.
    """
    if not chunks:
        return ViolationReport(predicate, checked, **kw)
    lhs = np.concatenate([c[1] for c in chunks])
    rhs = np.concatenate([c[2] for c in chunks])
    starts = np.cumsum([0] + [len(c[1]) for c in chunks])
    order = np.argsort(-(lhs - rhs), kind="stable")
    total = len(order)
    if limit is not None:
        order = order[:max(int(limit), 1)]
    ws = []
    for k in order:
        c = int(np.searchsorted(starts, k, side="right")) - 1
        pts, _, _, clause = chunks[c]
        ws.append(Witness(tuple(float(p) for p in pts[k - starts[c]]),
                          float(lhs[k]), float(rhs[k]), clause))
    return ViolationReport(predicate, checked, ws, violations=total, **kw)


def _check_region(space, region: Region, domain: Domain | None):
    if not len(region):
        raise ValueError("region must be nonempty")
    if domain is not None:
        for x in region:
            if x not in domain:
                raise DomainError("point %r is outside the domain %s" % (x, domain))


def check_qpb_axioms(space: QpbSpace, region: Region, tol: Tolerances = DEFAULT_TOL,
                     domain: Domain | None = None, limit: int | None = None
                     ) -> ViolationReport:
    """Check the four quasi-partial b-metric axioms on every pair/triple.

    1. q(x,y) = q(x,x) = q(y,y) implies x = y
    2. q(x,x) <= q(x,y)
    3. q(x,x) <= q(y,x)
    4. q(x,y) <= s(q(x,z) + q(z,y)) - q(z,z)
    """
    _check_region(space, region, domain)
    P = np.asarray(region.points)
    n = len(P)
    Q = space.matrix(region.points)
    D = np.diag(Q)
    s = space.s
    chunks = []

    # axiom 1: distances agree (within tol.zero) but the points differ
    same = (np.abs(Q - D[:, None]) <= tol.zero) & (np.abs(Q - D[None, :]) <= tol.zero)
    gap = np.abs(P[:, None] - P[None, :])
    i, j = np.nonzero(same & (gap > tol.eq))
    if len(i):
        chunks.append((np.stack([P[i], P[j]], 1), gap[i, j], np.full(len(i), tol.eq), "axiom1"))
    for name, M in (("axiom2", Q), ("axiom3", Q.T)):
        # M[i, j] is the distance the self-distance of point i must not exceed
        i, j = np.nonzero(D[:, None] > M + tol.slack)
        if len(i):
            chunks.append((np.stack([P[i], P[j]], 1), D[i], M[i, j], name))
    QT = Q.T
    for a in range(n):
        rhs = s * (Q[a][None, :] + QT) - D[None, :]  # [y, z]
        lhs = np.broadcast_to(Q[a][:, None], rhs.shape)
        y, z = np.nonzero(lhs > rhs + tol.slack)
        if len(y):
            pts = np.stack([np.full(len(y), P[a]), P[y], P[z]], 1)
            chunks.append((pts, lhs[y, z], rhs[y, z], "axiom4"))
    checked = 3 * n * n + n ** 3
    return _collect("qpb_axioms", checked, chunks, limit, region=region.source.value)


def check_dq_axioms(space: DqSpace, region: Region, tol: Tolerances = DEFAULT_TOL,
                    domain: Domain | None = None, limit: int | None = None
                    ) -> ViolationReport:
    """Check the dislocated quasi-metric properties.

    (i) q(x,y) = q(y,x) = 0 implies x = y;
    (ii) q(x,y) <= q(x,z) + q(z,y) - q(z,z).
    """
    _check_region(space, region, domain)
    P = np.asarray(region.points)
    n = len(P)
    Q = space.matrix(region.points)
    D = np.diag(Q)
    chunks = []
    gap = np.abs(P[:, None] - P[None, :])
    zero = (np.abs(Q) <= tol.zero) & (np.abs(Q.T) <= tol.zero)
    i, j = np.nonzero(zero & (gap > tol.eq))
    if len(i):
        chunks.append((np.stack([P[i], P[j]], 1), gap[i, j], np.full(len(i), tol.eq), "i"))
    QT = Q.T
    for a in range(n):
        rhs = Q[a][None, :] + QT - D[None, :]
        lhs = np.broadcast_to(Q[a][:, None], rhs.shape)
        y, z = np.nonzero(lhs > rhs + tol.slack)
        if len(y):
            pts = np.stack([np.full(len(y), P[a]), P[y], P[z]], 1)
            chunks.append((pts, lhs[y, z], rhs[y, z], "ii"))
    return _collect("dq_axioms", n * n + n ** 3, chunks, limit,
                    region=region.source.value)


def left_closed_ball(space: QpbSpace, center: float, radius: float, candidates: Region,
                     tol: Tolerances = DEFAULT_TOL) -> Region:
    """``{y in candidates : q(center, y) <= radius}``; may be empty."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    pts = [y for y in candidates if space.q(center, y) <= radius + tol.slack]
    return Region.from_values(pts, source="materialized-ball", tol=tol.eq, allow_empty=True)


def closed_ball(space: QpbSpace, center: float, radius: float, candidates: Region,
                tol: Tolerances = DEFAULT_TOL) -> Region:
    """Two-sided ball: both q(center, y) and q(y, center) within ``radius``."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    pts = [y for y in candidates
           if space.q(center, y) <= radius + tol.slack
           and space.q(y, center) <= radius + tol.slack]
    return Region.from_values(pts, source="materialized-ball", tol=tol.eq, allow_empty=True)


def contains_center(ball: Region, center: float, tol: Tolerances = DEFAULT_TOL) -> bool:
    return any(abs(p - center) <= tol.eq for p in ball)


class Separation(str, Enum):
    IDENTIFIED = "identified"
    SEPARATED = "separated"


def lemma1_separation(space: QpbSpace, x: float, y: float,
                      tol: Tolerances = DEFAULT_TOL) -> Separation:
    """Zero distance identifies points; used as the fixed-point equality test."""
    if space.q(x, y) <= tol.zero:
        return Separation.IDENTIFIED
    return Separation.SEPARATED
