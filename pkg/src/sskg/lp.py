"""Exact feasibility for {A x = b, x >= 0} over the rationals.

Phase-one simplex on a dense Fraction tableau with Bland's rule, so it
terminates and never rounds.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def feasible_point(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """A nonnegative solution of A x = b, or None if there is none."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    rows = []
    for i in range(m):
        r = [Fraction(v) for v in A[i]] + [Fraction(b[i])]
        if r[-1] < 0:
            r = [-v for v in r]
        rows.append(r)
    # columns: n originals, m artificials, rhs
    T = [r[:n] + [Fraction(int(i == j)) for j in range(m)] + [r[n]] for i, r in enumerate(rows)]
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimise the sum of artificials; reduced costs as a row
    cost = [Fraction(0)] * (width + 1)
    for r in T:
        for j in range(n):
            cost[j] -= r[j]
        cost[width] -= r[width]

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, r in enumerate(T):
            if r[enter] > 0:
                ratio = r[width] / r[enter]
                if best is None or (ratio, basis[i]) < best[:2]:
                    best = (ratio, basis[i], i)
        if best is None:  # cannot happen for a phase-one problem
            break
        _pivot(T, cost, best[2], enter)
        basis[best[2]] = enter

    if cost[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][width]
    return x


def _pivot(T, cost, i, j):
    piv = T[i][j]
    T[i] = [v / piv for v in T[i]]
    row = T[i]
    for k, r in enumerate(T):
        if k != i and r[j] != 0:
            f = r[j]
            T[k] = [a - f * c for a, c in zip(r, row)]
    if cost[j] != 0:
        f = cost[j]
        cost[:] = [a - f * c for a, c in zip(cost, row)]
