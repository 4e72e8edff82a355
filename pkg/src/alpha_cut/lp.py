"""Exact feasibility LP over the rationals and the hull queries built on it.

A two-phase simplex on a dense Fraction tableau with Bland's rule, which
cannot cycle. The seed only permutes the column order, so different seeds
may return different (equally valid) vertices of the feasible region.
"""

import random
from fractions import Fraction

from .exact import normalize


def feasible_point(a_eq, b_eq, seed=0):
    """Some x >= 0 with a_eq·x = b_eq exactly, or None when infeasible."""
    m = len(a_eq)
    if m == 0:
        return []
    n = len(a_eq[0])
    order = list(range(n))
    random.Random(seed).shuffle(order)
    rows = []
    for i in range(m):
        row = [Fraction(a_eq[i][j]) for j in order]
        rhs = Fraction(b_eq[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        rows.append(row + [Fraction(int(k == i)) for k in range(m)] + [rhs])
    total = n + m
    basis = [n + i for i in range(m)]
    # phase-one objective: minimize the sum of artificials, kept as reduced costs
    cost = [Fraction(0)] * (total + 1)
    for row in rows:
        for j in range(n):
            cost[j] -= row[j]
        cost[total] -= row[total]
    while True:
        enter = next((j for j in range(total) if cost[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[total] / row[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            break  # unbounded cannot happen in phase one
        _pivot(rows, cost, leave, enter)
        basis[leave] = enter
    if cost[total] != 0:
        return None
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[order[b]] = rows[i][total]
    return [normalize(v) for v in x]


def _pivot(rows, cost, r, c):
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    pr = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            rows[i] = [a - f * b for a, b in zip(row, pr)]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [a - f * b for a, b in zip(cost, pr)]


def convex_combination(pt, pts, seed=0):
    """Coefficients expressing ``pt`` as a convex combination of ``pts``, or None."""
    d = len(pt)
    a = [[p[k] for p in pts] for k in range(d)] + [[1] * len(pts)]
    return feasible_point(a, list(pt) + [1], seed)


def common_point(a, b, seed=0):
    """(point, λ, μ) with Σλa = Σμb a common point of both hulls, or None."""
    if not a or not b:
        raise ValueError("both point lists must be nonempty")
    d = len(a[0])
    na, nb = len(a), len(b)
    rows = [[p[k] for p in a] + [-q[k] for q in b] for k in range(d)]
    rows.append([1] * na + [0] * nb)
    rows.append([0] * na + [1] * nb)
    x = feasible_point(rows, [0] * d + [1, 1], seed)
    if x is None:
        return None
    lam, mu = x[:na], x[na:]
    point = tuple(normalize(sum(Fraction(l) * p[k] for l, p in zip(lam, a))) for k in range(d))
    return point, lam, mu


def lp_common_point(a, b, seed=0):
    got = common_point(a, b, seed)
    return None if got is None else got[0]
