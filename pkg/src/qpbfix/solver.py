"""Alternating iteration x_{2n+1} = U x_{2n}, x_{2n+2} = V x_{2n+1} and its diagnostics.

The iteration stops once both one-sided successive distances fall below
``tol``; the final point is then accepted as a common fixed point only if
q(x, Ux), q(Ux, x), q(x, Vx) and q(Vx, x) all vanish to within the zero
tolerance. Completeness of the ambient space cannot be checked numerically,
so a converged run is evidence about this trajectory only.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace
from enum import Enum

from .comparison import ComparisonFn
from .conditions import Scenario
from .dominance import DominancePair
from .space import DEFAULT_TOL, QpbSpace, Region, Tolerances, ViolationReport, Witness

TRACE_COLUMNS = ("n", "x", "q_fwd", "q_bwd", "q_self", "psi_bound", "in_ball")


class Status(str, Enum):
    COMMON_FIXED_POINT = "common-fixed-point"
    U_ONLY = "fixed-point-of-U-only"
    NO_CONVERGENCE = "no-convergence"
    BALL_ESCAPE = "left-ball-escape"


class ConfigurationError(ValueError):
    def __init__(self, message: str, report: ViolationReport | None = None):
        super().__init__(message)
        self.report = report


@dataclass
class LedgerEntry:
    observed: float  # max{q'_n, q_n}
    bound: float  # psi^n(max{q'_0, q_0})
    satisfied: bool


@dataclass
class IterationTrace:
    points: list[float]
    q_fwd: list[float] = field(default_factory=list)
    q_bwd: list[float] = field(default_factory=list)
    q_self: list[float] = field(default_factory=list)
    ledger: list[LedgerEntry] = field(default_factory=list)
    ball_membership: list[bool] = field(default_factory=list)

    def __post_init__(self):
        if self.q_fwd and len(self.q_fwd) != len(self.points) - 1:
            raise ValueError("q_fwd must have one entry fewer than points")

    def records(self) -> list[dict]:
        out = []
        for n, x in enumerate(self.points):
            step = n < len(self.q_fwd)
            out.append({
                "n": n,
                "x": x,
                "q_fwd": self.q_fwd[n] if step else None,
                "q_bwd": self.q_bwd[n] if step else None,
                "q_self": self.q_self[n] if n < len(self.q_self) else None,
                "psi_bound": self.ledger[n].bound if n < len(self.ledger) else None,
                "in_ball": self.ball_membership[n] if n < len(self.ball_membership) else None,
            })
        return out

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r) + "\n" for r in self.records())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, TRACE_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in self.records():
            w.writerow({k: "" if v is None else v for k, v in r.items()})
        return buf.getvalue()


def build_ledger(trace: IterationTrace, psi: ComparisonFn, tol: Tolerances = DEFAULT_TOL
                 ) -> list[LedgerEntry]:
    if not trace.q_fwd:
        return []
    bound = max(trace.q_fwd[0], trace.q_bwd[0])
    out = []
    for qf, qb in zip(trace.q_fwd, trace.q_bwd):
        obs = max(qf, qb)
        out.append(LedgerEntry(obs, bound, obs <= bound + tol.slack))
        bound = psi(bound)
    return out


def trace_from_points(space: QpbSpace, points, psi: ComparisonFn | None = None) -> IterationTrace:
    """Trace of an arbitrary sequence, for diagnostics on hand-made sequences."""
    pts = [float(p) for p in points]
    tr = IterationTrace(pts,
                        [space.q(a, b) for a, b in zip(pts, pts[1:])],
                        [space.q(b, a) for a, b in zip(pts, pts[1:])],
                        [space.q(a, a) for a in pts])
    if psi is not None:
        tr.ledger = build_ledger(tr, psi)
    return tr


def verify_ledger(trace: IterationTrace, psi: ComparisonFn, tol: Tolerances = DEFAULT_TOL
                  ) -> ViolationReport:
    """Witness every n with max{q'_n, q_n} > psi^n(max{q'_0, q_0})."""
    if not trace.points:
        raise ValueError("trace is empty")
    ws = [Witness((float(n),), e.observed, e.bound, "ledger")
          for n, e in enumerate(build_ledger(trace, psi, tol)) if not e.satisfied]
    return ViolationReport("psi_ledger", len(trace.q_fwd), ws)


@dataclass
class CauchyDiagnostics:
    tail: int
    max_fwd: float  # max q(x_m, x_n), m <= n in the tail window
    max_bwd: float  # max q(x_n, x_m)
    tol: float
    below_tol: bool

    def to_dict(self) -> dict:
        return {"tail": self.tail, "max_fwd": self.max_fwd, "max_bwd": self.max_bwd,
                "tol": self.tol, "below_tol": self.below_tol}


def cauchy_diagnostics(trace: IterationTrace, space: QpbSpace, tail: int = 10,
                       tol: float = 1e-6) -> CauchyDiagnostics:
    """Pairwise distances over the last ``tail`` points, both orders.

    Small maxima are evidence for the Cauchy double limit; no limit point is
    claimed.
    """
    if tail < 1 or tail > len(trace.points):
        raise ValueError("tail must be between 1 and the trace length")
    win = trace.points[-tail:]
    fwd = max(space.q(win[m], win[n]) for m in range(tail) for n in range(m, tail))
    bwd = max(space.q(win[n], win[m]) for m in range(tail) for n in range(m, tail))
    return CauchyDiagnostics(tail, fwd, bwd, tol, fwd <= tol and bwd <= tol)


@dataclass
class SolveResult:
    status: Status
    limit: float | None
    iterations: int
    residuals: dict
    trace: IterationTrace
    cauchy: CauchyDiagnostics
    escape_index: int | None = None
    max_visited: float | None = None
    dominance_on_trajectory: bool = True

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "limit": self.limit,
            "iterations": self.iterations,
            "residuals": self.residuals,
            "escape_index": self.escape_index,
            "max_visited": self.max_visited,
            "dominance_on_trajectory": self.dominance_on_trajectory,
            "cauchy": self.cauchy.to_dict(),
            "trace": self.trace.records(),
        }


def residuals(sc: Scenario, x: float) -> dict:
    ux, vx = sc.apply("U", x), sc.apply("V", x)
    return {"q(x,Ux)": sc.q(x, ux), "q(Ux,x)": sc.q(ux, x),
            "q(x,Vx)": sc.q(x, vx), "q(Vx,x)": sc.q(vx, x)}


def _classify(res: dict, tol: Tolerances) -> Status:
    u_ok = res["q(x,Ux)"] <= tol.zero and res["q(Ux,x)"] <= tol.zero
    v_ok = res["q(x,Vx)"] <= tol.zero and res["q(Vx,x)"] <= tol.zero
    if u_ok and v_ok:
        return Status.COMMON_FIXED_POINT
    if u_ok:
        return Status.U_ONLY
    return Status.NO_CONVERGENCE


def iterate(sc: Scenario, max_iter: int = 10000, tol: float = 1e-9, start: float | None = None,
            tolerances: Tolerances = DEFAULT_TOL, cauchy_tail: int = 10) -> SolveResult:
    """Run the alternating U/V iteration from ``start`` (default x0).

    Ball membership is the exact predicate q(x0, x_n) <= epsilon, with the
    ball always centred at the scenario's x0.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    x0 = sc.x0

    def in_ball(p):
        return sc.q(x0, p) <= sc.epsilon + tolerances.slack

    x = x0 if start is None else float(start)
    tr = IterationTrace([x], q_self=[sc.q(x, x)], ball_membership=[in_ball(x)])
    status, limit, escape, iterations = Status.NO_CONVERGENCE, None, None, 0
    dominated = True

    res = residuals(sc, x)
    if _classify(res, tolerances) is Status.COMMON_FIXED_POINT:
        status, limit = Status.COMMON_FIXED_POINT, x
    else:
        for n in range(max_iter):
            y = sc.apply("U" if n % 2 == 0 else "V", x)
            qf, qb = sc.q(x, y), sc.q(y, x)
            dominated = dominated and sc.dominance.holds(x, y, tolerances.slack)
            tr.points.append(y)
            tr.q_fwd.append(qf)
            tr.q_bwd.append(qb)
            tr.q_self.append(sc.q(y, y))
            tr.ball_membership.append(in_ball(y))
            iterations = n + 1
            if not tr.ball_membership[-1]:
                status, escape = Status.BALL_ESCAPE, n + 1
                res = residuals(sc, y) if _safe(sc, y) else {}
                break
            if max(qf, qb) <= tol:
                res = residuals(sc, y)
                status = _classify(res, tolerances)
                if status is not Status.NO_CONVERGENCE:
                    limit = y
                break
            x = y
        else:
            res = residuals(sc, x) if _safe(sc, x) else {}

    tr.ledger = build_ledger(tr, sc.psi, tolerances)
    tail = min(cauchy_tail, len(tr.points))
    return SolveResult(status, limit, iterations, res, tr,
                       cauchy_diagnostics(tr, sc.space, tail),
                       escape_index=escape, max_visited=max(tr.points),
                       dominance_on_trajectory=dominated)


def _safe(sc: Scenario, x: float) -> bool:
    try:
        residuals(sc, x)
    except ValueError:
        return False
    return True


@dataclass
class UniquenessProbe:
    fixed_points: list[float]
    pairwise_guard: list[list[bool]]
    unique_claim_applicable: bool
    statuses: list[str]

    @property
    def contradiction(self) -> bool:
        """Guard holds between distinct limits, yet more than one was found."""
        return self.unique_claim_applicable and len(self.fixed_points) > 1

    def to_dict(self) -> dict:
        return {"fixed_points": self.fixed_points, "pairwise_guard": self.pairwise_guard,
                "unique_claim_applicable": self.unique_claim_applicable,
                "contradiction": self.contradiction, "statuses": self.statuses}


def uniqueness_probe(sc: Scenario, starts: Region, max_iter: int = 10000, tol: float = 1e-9,
                     tolerances: Tolerances = DEFAULT_TOL) -> UniquenessProbe:
    if not len(starts):
        raise ValueError("starts must be nonempty")
    limits, statuses = [], []
    for s0 in starts:
        r = iterate(sc, max_iter, tol, start=s0, tolerances=tolerances)
        statuses.append(r.status.value)
        if r.status is Status.COMMON_FIXED_POINT:
            limits.append(r.limit)
    fixed = list(Region.from_values(limits, tol=tolerances.eq, allow_empty=True).points)
    guard = [[i == j or sc.dominance.holds(a, b, tolerances.slack)
              for j, b in enumerate(fixed)] for i, a in enumerate(fixed)]
    applicable = all(all(row) for row in guard)
    return UniquenessProbe(fixed, guard, applicable, statuses)


SINGLE_MAP = "single-map"
METRIC = "metric"
DELTA_ONLY = "delta-only"


def metric_violations(space: QpbSpace, region: Region, tol: Tolerances = DEFAULT_TOL
                      ) -> ViolationReport:
    """Asymmetric pairs and nonzero self-distances on ``region``."""
    ws = []
    pts = list(region)
    for i, a in enumerate(pts):
        if abs(space.q(a, a)) > tol.zero:
            ws.append(Witness((a,), abs(space.q(a, a)), 0.0, "zero self-distance"))
        for b in pts[i + 1:]:
            ab, ba = space.q(a, b), space.q(b, a)
            if abs(ab - ba) > tol.slack:
                w = Witness((a, b), ab, ba, "symmetry") if ab > ba else \
                    Witness((b, a), ba, ab, "symmetry")
                ws.append(w)
    n = len(pts)
    return ViolationReport("metric", n + n * (n - 1) // 2, ws)


def solve_single_map(sc: Scenario, mode: str = SINGLE_MAP, resolution: int = 41,
                     max_iter: int = 10000, tol: float = 1e-9,
                     tolerances: Tolerances = DEFAULT_TOL) -> SolveResult:
    """Single-map specialisation (V := U) with optional metric or delta-only mode."""
    if mode not in (SINGLE_MAP, METRIC, DELTA_ONLY):
        raise ConfigurationError("unknown mode %r" % mode)
    one = replace(sc, V=sc.U)
    if mode == DELTA_ONLY:
        one = replace(one, dominance=DominancePair.delta_only(sc.dominance.delta))
    elif mode == METRIC:
        if sc.space.s != 1:
            raise ConfigurationError("metric mode needs s = 1, got s = %r" % sc.space.s)
        rep = metric_violations(sc.space, sc.ball(resolution, tolerances), tolerances)
        if not rep.passed:
            w = rep.witnesses[0]
            raise ConfigurationError(
                "distance is not a metric on the ball: %d violations, e.g. %s at %r "
                "(%r vs %r)" % (rep.violations, w.clause, w.points, w.lhs, w.rhs), rep)
    return iterate(one, max_iter, tol, tolerances=tolerances)
