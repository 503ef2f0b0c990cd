"""Naive reference scans used to cross-check the vectorized checkers.

Each function is a plain nested loop over the definition and returns a dict
mapping (clause, points) -> margin, so witness sets can be compared exactly.
"""
import math

EQ, ZERO, SLACK = 1e-9, 1e-9, 1e-12


def qpb_axioms(q, s, pts):
    out = {}
    for x in pts:
        for y in pts:
            qxy, qxx, qyy = q(x, y), q(x, x), q(y, y)
            if abs(qxy - qxx) <= ZERO and abs(qxy - qyy) <= ZERO and abs(x - y) > EQ:
                out[("axiom1", (x, y))] = abs(x - y) - EQ
            if qxx > qxy + SLACK:
                out[("axiom2", (x, y))] = qxx - qxy
            if qxx > q(y, x) + SLACK:
                out[("axiom3", (x, y))] = qxx - q(y, x)
            for z in pts:
                rhs = s * (q(x, z) + q(z, y)) - q(z, z)
                if qxy > rhs + SLACK:
                    out[("axiom4", (x, y, z))] = qxy - rhs
    return out


def dq_axioms(q, pts):
    out = {}
    for x in pts:
        for y in pts:
            if abs(q(x, y)) <= ZERO and abs(q(y, x)) <= ZERO and abs(x - y) > EQ:
                out[("i", (x, y))] = abs(x - y) - EQ
            for z in pts:
                rhs = q(x, z) + q(z, y) - q(z, z)
                if q(x, y) > rhs + SLACK:
                    out[("ii", (x, y, z))] = q(x, y) - rhs
    return out


def dominated(delta, phi, T, pts):
    out = {}
    for x in pts:
        t = T(x)
        if delta(x, t) < phi(x, t) - SLACK:
            out[("dominated", (x, t))] = phi(x, t) - delta(x, t)
    return out


def triangular(delta, phi, pts):
    out = {}
    for x in pts:
        for y in pts:
            if not delta(x, y) >= phi(x, y):
                continue
            for z in pts:
                if delta(y, z) >= phi(y, z) and delta(x, z) < phi(x, z) - SLACK:
                    out[("triangular", (x, y, z))] = phi(x, z) - delta(x, z)
    return out


def cond1(q, s, U, V, delta, phi, psi, pts):
    out, skipped = {}, 0
    for x in pts:
        for y in pts:
            if not (delta(x, y) >= phi(x, y) - SLACK or delta(y, x) >= phi(y, x) - SLACK):
                skipped += 1
                continue
            ux, vy = U(x), V(y)
            lhs = max(q(ux, vy), q(vy, ux))
            M = max(q(x, y), q(x, ux), q(y, vy), (q(x, vy) + q(y, ux) - q(x, x)) / (2 * s))
            if lhs > psi(M) + SLACK:
                out[("condition1", (x, y))] = lhs - psi(M)
    return out, skipped


def cond2(q, U, V, pts):
    out = {}
    for x in pts:
        for y in pts:
            lhs, rhs = q(V(y), U(x)), q(x, y)
            if lhs > rhs + SLACK:
                out[("condition2", (x, y))] = lhs - rhs
    return out


def cond3(q, s, U, psi, x0, eps, j_max):
    t0 = max(q(x0, U(x0)), q(U(x0), x0))
    sums = []
    for j in range(j_max + 1):
        total = 0.0
        for i in range(j + 1):
            p = t0
            for _ in range(i):
                p = psi(p)
            total += s ** (i + 1) * p
        sums.append(total)
    return sums, all(v <= eps + SLACK for v in sums)


def as_dict(report):
    return {(w.clause, w.points): w.margin for w in report.witnesses}


def same(report, oracle):
    got = as_dict(report)
    if set(got) != set(oracle):
        return False
    return all(math.isclose(got[k], oracle[k], rel_tol=1e-12, abs_tol=1e-15) for k in got)
