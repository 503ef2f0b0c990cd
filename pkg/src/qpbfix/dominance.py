"""Auxiliary mappings delta/phi and the dominance and triangularity checks.

delta and phi are nominally nonnegative, but the catalogued example uses
cos/sin branches that go negative, so values are accepted as plain reals and
only the inequalities between them are evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .space import (DEFAULT_TOL, Domain, DomainError, EvaluationError, Region,
                    Tolerances, ViolationReport, _collect)

PAIR = "pair"
DELTA_ONLY = "delta-only"


def _one(x, y):
    return 1.0


@dataclass(frozen=True)
class DominancePair:
    delta: Callable[[float, float], float]
    phi: Callable[[float, float], float] = _one
    mode: str = PAIR

    @classmethod
    def delta_only(cls, delta) -> "DominancePair":
        return cls(delta, _one, DELTA_ONLY)

    def d(self, x, y) -> float:
        return _finite(self.delta(x, y), "delta", x, y)

    def p(self, x, y) -> float:
        if self.mode == DELTA_ONLY:
            return 1.0
        return _finite(self.phi(x, y), "phi", x, y)

    def holds(self, x, y, slack: float = 0.0) -> bool:
        """delta(x, y) >= phi(x, y) - slack."""
        return self.d(x, y) >= self.p(x, y) - slack


def _finite(v, name, x, y) -> float:
    if not math.isfinite(v):
        raise EvaluationError("non-finite %s(%r, %r) = %r" % (name, x, y, v))
    return float(v)


def dominance_guard(pair: DominancePair, x: float, y: float,
                    tol: Tolerances = DEFAULT_TOL) -> bool:
    """Gate of the contraction condition: dominance in either order."""
    return pair.holds(x, y, tol.slack) or pair.holds(y, x, tol.slack)


def is_locally_dominated(pair: DominancePair, T: Callable[[float], float], region: Region,
                         tol: Tolerances = DEFAULT_TOL, domain: Domain | None = None,
                         limit: int | None = None, name: str = "T") -> ViolationReport:
    """Witness every x with delta(x, Tx) < phi(x, Tx).

    Witness points are ``(x, Tx)``; lhs is phi, rhs is delta.
    """
    pts, lhs, rhs = [], [], []
    for x in region:
        tx = T(x)
        if not math.isfinite(tx) or (domain is not None and tx not in domain):
            raise DomainError("map %s sends %r outside the domain (%r)" % (name, x, tx))
        d, p = pair.d(x, tx), pair.p(x, tx)
        if d < p - tol.slack:
            pts.append((x, tx))
            lhs.append(p)
            rhs.append(d)
    chunks = [(np.array(pts), np.array(lhs), np.array(rhs), "dominated")] if pts else []
    return _collect("locally_dominated[%s]" % name, len(region), chunks, limit,
                    region=region.source.value)


def is_pair_triangular(pair: DominancePair, region: Region, tol: Tolerances = DEFAULT_TOL,
                       limit: int | None = None) -> ViolationReport:
    """delta >= phi on (x,y) and (y,z) must give delta >= phi on (x,z)."""
    P = np.asarray(region.points)
    n = len(P)
    Dm = np.array([[pair.d(x, y) for y in P] for x in P]).reshape(n, n)
    Pm = np.array([[pair.p(x, y) for y in P] for x in P]).reshape(n, n)
    G = Dm >= Pm
    bad_xz = Dm < Pm - tol.slack
    chunks = []
    for a in range(n):
        hit = G[a][:, None] & G & bad_xz[a][None, :]  # [y, z]
        y, z = np.nonzero(hit)
        if len(y):
            pts = np.stack([np.full(len(y), P[a]), P[y], P[z]], 1)
            chunks.append((pts, Pm[a, z], Dm[a, z], "triangular"))
    return _collect("pair_triangular", n ** 3, chunks, limit, region=region.source.value)
