"""Registered scenarios: the piecewise [0, 5) example and small control cases."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .comparison import ComparisonFn
from .conditions import Scenario
from .dominance import DominancePair
from .space import Domain, QpbSpace

# X = [0, 5) split into A = [0, 4] (closed, so 4 uses the A branches) and B = (4, 5)
X = Domain.interval(0.0, 5.0, True, False)


def in_A(x: float) -> bool:
    return 0.0 <= x <= 4.0


def in_B(x: float) -> bool:
    return 4.0 < x < 5.0


def example1_q(x: float, y: float) -> float:
    if in_A(x) and in_A(y) and x == y:
        return x
    if in_B(x) and in_A(y):
        return 3 * x
    if in_B(x) and in_B(y):
        return abs(x - y) ** 2
    return max(2 * x, y) + x


def example1_U(x: float) -> float:
    return math.sin(x / 2) / 6 if in_A(x) else x * x


def example1_V(x: float) -> float:
    return math.log(x + 1) / 6 if in_A(x) else math.exp(x)


def example1_delta(x: float, y: float) -> float:
    return math.cos((x + y) / 4) if in_A(x) and in_A(y) else math.log(x + y)


def example1_phi(x: float, y: float) -> float:
    return math.sin((x + y) / 4) if in_A(x) and in_A(y) else math.exp(x + y)


def standard_metric(x: float, y: float) -> float:
    return abs(x - y)


@dataclass(frozen=True)
class Expected:
    axiom_verdict: bool
    fixed_point: float | None
    epsilon: float
    s: float
    check_verdict: bool
    notes: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    scenario: Scenario
    expected: Expected

    def listing(self) -> dict:
        sc = self.scenario
        return {"name": self.name, "domain": str(sc.domain), "s": sc.space.s,
                "epsilon": sc.epsilon, "notes": list(self.expected.notes)}


EXAMPLE1_NOTES = (
    "V is read as log(x+1)/6 on A and e^x elsewhere; the printed definition "
    "mentions y and e^(x+y) for a one-argument map.",
    "log is the natural logarithm.",
    "delta = cos((x+y)/4) goes negative on parts of A x A; values are used as reals.",
    "delta(x,Tx) >= phi(x,Tx) fails for x above roughly 2.93 (V) and 2.98 (U), "
    "so local dominance on all of A does not hold numerically.",
    "delta >= phi on A x A holds exactly when x + y <= pi, so the pair is not "
    "locally triangular on A (e.g. x=3, y=0, z=3).",
    "The printed case tables list q(y,x) = 3x for x in A, y in B and q(x,x) = x "
    "for x in B; the formula gives 3y and 0. Two triple-case cells differ the same way.",
)


def example1() -> CatalogEntry:
    sc = Scenario(
        space=QpbSpace(example1_q, 2.0, "example1"),
        U=example1_U,
        V=example1_V,
        dominance=DominancePair(example1_delta, example1_phi),
        psi=ComparisonFn(lambda t: t / 6, 2.0, "x/6"),
        x0=0.5,
        epsilon=4.5,
        domain=X,
        name="example1",
        notes=EXAMPLE1_NOTES,
    )
    return CatalogEntry("example1", sc, Expected(True, 0.0, 4.5, 2.0, False, EXAMPLE1_NOTES))


def _half(x: float) -> float:
    return x / 2


def banach_control() -> CatalogEntry:
    sc = Scenario(
        space=QpbSpace(standard_metric, 1.0, "standard"),
        U=_half, V=_half,
        dominance=DominancePair(lambda x, y: 1.0, lambda x, y: 1.0),
        psi=ComparisonFn(_half, 1.0, "x/2"),
        x0=1.0, epsilon=1.0,
        domain=Domain.interval(0.0, 1.0),
        name="banach-control",
    )
    return CatalogEntry("banach-control", sc, Expected(True, 0.0, 1.0, 1.0, True))


def broken_control() -> CatalogEntry:
    notes = ("q(x,y) = x - y takes negative values; axiom 2 fails.",)
    sc = Scenario(
        space=QpbSpace(lambda x, y: x - y, 1.0, "signed difference"),
        U=_half, V=_half,
        dominance=DominancePair(lambda x, y: 1.0, lambda x, y: 1.0),
        psi=ComparisonFn(_half, 1.0, "x/2"),
        x0=1.0, epsilon=1.0,
        domain=Domain.interval(0.0, 1.0),
        name="broken-control",
        notes=notes,
    )
    return CatalogEntry("broken-control", sc, Expected(False, None, 1.0, 1.0, False, notes))


def non_contractive_control() -> CatalogEntry:
    notes = ("psi is the identity, so psi(t) < t fails for every t > 0.",)
    sc = Scenario(
        space=QpbSpace(standard_metric, 1.0, "standard"),
        U=_half, V=_half,
        dominance=DominancePair(lambda x, y: 1.0, lambda x, y: 1.0),
        psi=ComparisonFn(lambda t: t, 1.0, "identity"),
        x0=1.0, epsilon=1.0,
        domain=Domain.interval(0.0, 1.0),
        name="non-contractive-control",
        notes=notes,
    )
    return CatalogEntry("non-contractive-control", sc,
                        Expected(True, 0.0, 1.0, 1.0, False, notes))


def controls() -> list[CatalogEntry]:
    return [banach_control(), broken_control(), non_contractive_control()]


def entries() -> list[CatalogEntry]:
    return [example1(), *controls()]


def get(name: str) -> CatalogEntry:
    for e in entries():
        if e.name == name:
            return e
    raise KeyError(name)


def listing() -> list[dict]:
    return [e.listing() for e in entries()]


# Table rows: (table, case, subcase, column labels, membership of each
# variable, printed cell expressions). Variables are x, y and optionally z.
def _m(a, b):
    return max(2 * a, b) + a


TABLE_ROWS = [
    ("1", "I", "", ("q(x,y)", "q(x,x)", "q(y,y)"), "AA",
     (lambda x, y: _m(x, y), lambda x, y: x, lambda x, y: y)),
    ("1", "II", "", ("q(x,y)", "q(x,x)", "q(y,y)"), "BB",
     (lambda x, y: abs(x - y) ** 2, lambda x, y: 0.0, lambda x, y: 0.0)),
    ("1", "III", "", ("q(x,y)", "q(x,x)", "q(y,y)"), "AB",
     (lambda x, y: _m(x, y), lambda x, y: x, lambda x, y: 0.0)),
    ("1", "IV", "", ("q(x,y)", "q(x,x)", "q(y,y)"), "BA",
     (lambda x, y: 3 * x, lambda x, y: 0.0, lambda x, y: y)),
    ("2", "I", "", ("q(x,x)", "q(x,y)", "q(y,x)"), "AA",
     (lambda x, y: x, lambda x, y: _m(x, y), lambda x, y: _m(y, x))),
    ("2", "II", "", ("q(x,x)", "q(x,y)", "q(y,x)"), "BB",
     (lambda x, y: 0.0, lambda x, y: abs(x - y) ** 2, lambda x, y: abs(y - x) ** 2)),
    ("2", "III", "", ("q(x,x)", "q(x,y)", "q(y,x)"), "AB",
     (lambda x, y: x, lambda x, y: _m(x, y), lambda x, y: 3 * x)),
    ("2", "IV", "", ("q(x,x)", "q(x,y)", "q(y,x)"), "BA",
     (lambda x, y: x, lambda x, y: 3 * x, lambda x, y: _m(y, x))),
]
_T3 = ("q(x,y)", "q(x,z)", "q(z,y)", "q(z,z)")
TABLE_ROWS += [
    ("3", "I", "I", _T3, "AAA",
     (lambda x, y, z: _m(x, y), lambda x, y, z: _m(x, z), lambda x, y, z: _m(z, y),
      lambda x, y, z: z)),
    ("3", "I", "II", _T3, "AAB",
     (lambda x, y, z: _m(x, y), lambda x, y, z: _m(x, z), lambda x, y, z: 3 * z,
      lambda x, y, z: z)),
    ("3", "II", "I", _T3, "BBA",
     (lambda x, y, z: abs(x - y) ** 2, lambda x, y, z: 3 * x, lambda x, y, z: _m(z, y),
      lambda x, y, z: z)),
    ("3", "II", "II", _T3, "BBB",
     (lambda x, y, z: abs(x - y) ** 2, lambda x, y, z: abs(x - z) ** 2,
      lambda x, y, z: abs(z - y) ** 2, lambda x, y, z: 0.0)),
    ("3", "III", "I", _T3, "ABA",
     (lambda x, y, z: _m(x, y), lambda x, y, z: _m(x, z), lambda x, y, z: _m(z, y),
      lambda x, y, z: z)),
    ("3", "III", "II", _T3, "ABB",
     (lambda x, y, z: _m(x, y), lambda x, y, z: _m(x, z), lambda x, y, z: abs(z - y) ** 2,
      lambda x, y, z: 0.0)),
    ("3", "IV", "I", _T3, "BAA",
     (lambda x, y, z: 3 * x, lambda x, y, z: 3 * x, lambda x, y, z: _m(z, y),
      lambda x, y, z: z)),
    ("3", "IV", "II", _T3, "BAB",
     (lambda x, y, z: 3 * x, lambda x, y, z: abs(x - z) ** 2, lambda x, y, z: abs(z - y) ** 2,
      lambda x, y, z: 0.0)),
]

_ARGS = {"q(x,y)": (0, 1), "q(x,x)": (0, 0), "q(y,y)": (1, 1), "q(y,x)": (1, 0),
         "q(x,z)": (0, 2), "q(z,y)": (2, 1), "q(z,z)": (2, 2)}

DEFAULT_TABLE_SAMPLES = {"A": (0.0, 0.5, 1.0, 2.5, 4.0), "B": (4.1, 4.5, 4.9)}


@dataclass
class TableRow:
    table: str
    case: str
    subcase: str
    samples: int
    mismatches: dict  # column -> first (points, printed, defined)
    axiom_ok: bool  # the axiom the table is meant to illustrate, on every sample

    @property
    def agrees(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {"table": self.table, "case": self.case, "subcase": self.subcase,
                "samples": self.samples, "agrees": self.agrees,
                "mismatches": self.mismatches, "axiom_ok": self.axiom_ok}


def _axiom_ok(q, s, pts, table) -> bool:
    if table == "1":
        x, y = pts
        return not (q(x, y) == q(x, x) == q(y, y))  # samples are distinct
    if table == "2":
        x, y = pts
        return q(x, x) <= q(x, y) and q(x, x) <= q(y, x)
    x, y, z = pts
    return q(x, y) <= s * (q(x, z) + q(z, y)) - q(z, z)


def verify_tables(entry: CatalogEntry | None = None, samples: dict | None = None
                  ) -> list[TableRow]:
    """Compare each printed table cell with the implemented distance.

    Samples are drawn from ``samples['A']`` and ``samples['B']`` according
    to each row's case, keeping x, y (and z) pairwise distinct.
    """
    entry = entry or example1()
    samples = samples or DEFAULT_TABLE_SAMPLES
    q, s = entry.scenario.space.q, entry.scenario.space.s
    rows = []
    for table, case, sub, cols, kinds, exprs in TABLE_ROWS:
        pools = [samples[k] for k in kinds]
        count, mism, ok = 0, {}, True
        for pts in itertools.product(*pools):
            if len(set(pts)) < len(pts):
                continue
            count += 1
            for col, expr in zip(cols, exprs):
                i, j = _ARGS[col]
                printed, defined = expr(*pts), q(pts[i], pts[j])
                if not math.isclose(printed, defined, rel_tol=1e-12, abs_tol=1e-12) \
                        and col not in mism:
                    mism[col] = {"points": list(pts), "printed": printed, "defined": defined}
            ok = ok and _axiom_ok(q, s, pts, table)
        rows.append(TableRow(table, case, sub, count, mism, ok))
    return rows
