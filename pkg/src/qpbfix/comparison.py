"""b-comparison functions and finite evidence for their defining properties."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .space import DEFAULT_TOL, EvaluationError, Tolerances, ViolationReport, Witness

CONVERGENT = "convergent-evidence"
DIVERGENT = "divergent-evidence"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ComparisonFn:
    psi: Callable[[float], float]
    claimed_s: float = 1.0
    name: str = ""

    def __call__(self, t: float) -> float:
        v = self.psi(t)
        if not math.isfinite(v):
            raise EvaluationError("non-finite psi(%r) = %r" % (t, v))
        return float(v)


def psi_iterate(f: ComparisonFn, t: float, n: int) -> float:
    """n-fold composition of psi applied to t; psi^0 is the identity."""
    if n < 0:
        raise ValueError("n must be >= 0")
    for _ in range(n):
        t = f(t)
    return t


def validate_monotone(f: ComparisonFn, grid: Sequence[float],
                      tol: Tolerances = DEFAULT_TOL) -> ViolationReport:
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted ascending")
    vals = [f(t) for t in grid]
    ws = [Witness((a, b), va, vb, "non-decreasing")
          for a, b, va, vb in zip(grid, grid[1:], vals, vals[1:])
          if vb < va - tol.slack]
    return ViolationReport("psi_monotone", max(len(grid) - 1, 0), ws)


def validate_strict_contraction(f: ComparisonFn, grid: Sequence[float],
                                tol: Tolerances = DEFAULT_TOL) -> ViolationReport:
    """Every t > 0 in ``grid`` must satisfy psi(t) < t."""
    if any(t <= 0 for t in grid):
        raise ValueError("grid must be strictly positive")
    ws = []
    for t in grid:
        v = f(t)
        if v >= t - tol.slack:
            ws.append(Witness((t,), v, t, "psi(t) < t"))
    return ViolationReport("psi_strict_contraction", len(grid), ws)


@dataclass
class SeriesEvidence:
    t: float
    s: float
    partial_sums: list[float]
    term_ratios: list[float | None]
    verdict: str
    terms: list[float] = field(default_factory=list, repr=False)

    @property
    def limit_estimate(self) -> float:
        return self.partial_sums[-1]

    def to_dict(self) -> dict:
        return {"t": self.t, "s": self.s, "partial_sums": self.partial_sums,
                "term_ratios": self.term_ratios, "verdict": self.verdict}


def validate_series(f: ComparisonFn, t: float, j_max: int = 64, ratio_bound: float = 0.95,
                    s: float | None = None, tol: Tolerances = DEFAULT_TOL) -> SeriesEvidence:
    """Graded evidence that sum_i s^i psi^i(t) converges.

    Convergence of an infinite series cannot be decided from finitely many
    terms, so the verdict is one of ``convergent-evidence`` (term ratios
    eventually bounded by ``ratio_bound`` and a flat tail),
    ``divergent-evidence`` (terms stop decreasing over the second half) or
    ``inconclusive``.
    """
    if j_max < 2:
        raise ValueError("j_max must be >= 2")
    if not ratio_bound < 1:
        raise ValueError("ratio_bound must be < 1")
    s = f.claimed_s if s is None else s
    terms, sums = [], []
    p, acc = t, 0.0
    for i in range(j_max + 1):
        term = s ** i * p
        if not math.isfinite(term):
            raise EvaluationError("non-finite series term at i=%d" % i)
        terms.append(term)
        acc += term
        sums.append(acc)
        p = f(p)

    ratios: list[float | None] = []
    for a, b in zip(terms, terms[1:]):
        if a == 0:
            ratios.append(0.0 if b == 0 else None)
        else:
            ratios.append(b / a)

    def bounded(r):
        return r is not None and r <= ratio_bound

    # smallest i0 with every later ratio bounded
    i0 = len(ratios)
    while i0 > 0 and bounded(ratios[i0 - 1]):
        i0 -= 1
    flat_tail = abs(sums[-1] - sums[-2]) <= tol.slack
    half = j_max // 2
    if i0 <= half and flat_tail:
        verdict = CONVERGENT
    elif all(b >= a > 0 for a, b in zip(terms[half:], terms[half + 1:])):
        verdict = DIVERGENT
    else:
        verdict = INCONCLUSIVE
    return SeriesEvidence(t, s, sums, ratios, verdict, terms)
