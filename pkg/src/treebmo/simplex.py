"""Exact two-phase simplex over the rationals.

Solves  min c.x  subject to  A x = b,  x >= 0  with Fraction arithmetic
throughout, so optima and infeasibility verdicts are exact.  Pricing is
Dantzig (most negative reduced cost) for speed, switching permanently to
Bland's smallest-index rule after a pivot budget to rule out cycling;
either way every verdict is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class InfeasibleError(ValueError):
    """The constraint system A x = b, x >= 0 has no solution."""


class UnboundedError(ValueError):
    """The objective is unbounded below on the feasible region."""


@dataclass
class LPSolution:
    x: list[Fraction]
    objective: Fraction


def solve_lp(
    a: list[list[Fraction]], b: list[Fraction], c: list[Fraction]
) -> LPSolution:
    m = len(a)
    n = len(c)
    if any(len(row) != n for row in a) or len(b) != m:
        raise ValueError("inconsistent LP dimensions")

    rows = [[Fraction(v) for v in row] for row in a]
    rhs = [Fraction(v) for v in b]
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    # phase 1: one artificial variable per row, minimize their sum
    tab = [rows[i] + [Fraction(0)] * m + [rhs[i]] for i in range(m)]
    for i in range(m):
        tab[i][n + i] = Fraction(1)
    basis = [n + i for i in range(m)]
    obj = [Fraction(0)] * (n + m + 1)
    for i in range(m):  # reduced costs of cost vector (0...0, 1...1) under this basis
        obj = [o - t for o, t in zip(obj, tab[i])]
    for j in range(n + m):
        if j >= n:
            obj[j] += 1
    _run_simplex(tab, basis, obj, n + m)
    if -obj[-1] > 0:
        raise InfeasibleError("phase 1 optimum is positive")

    # drive artificials out of the basis; drop redundant rows
    keep: list[int] = []
    for i in range(m):
        if basis[i] < n:
            keep.append(i)
            continue
        pivot_col = next((j for j in range(n) if tab[i][j] != 0), None)
        if pivot_col is None:
            continue  # all-zero row: redundant constraint
        _pivot(tab, basis, None, i, pivot_col)
        keep.append(i)
    tab = [tab[i] for i in keep]
    basis = [basis[i] for i in keep]

    # phase 2 on the original columns
    tab = [row[:n] + [row[-1]] for row in tab]
    obj = [Fraction(v) for v in c] + [Fraction(0)]
    for i, bi in enumerate(basis):
        coef = obj[bi]
        if coef:
            obj = [o - coef * t for o, t in zip(obj, tab[i])]
    _run_simplex(tab, basis, obj, n)

    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = tab[i][-1]
    return LPSolution(x, sum((c[j] * x[j] for j in range(n)), Fraction(0)))


BLAND_AFTER = 2000


def _run_simplex(tab, basis, obj, ncols) -> None:
    """Pivot until the maintained reduced-cost row `obj` is nonnegative."""
    iterations = 0
    while True:
        iterations += 1
        bland = iterations > BLAND_AFTER
        entering = None
        best_cost = Fraction(0)
        for j in range(ncols):
            rj = obj[j]
            if rj < 0:
                if bland:
                    entering = j
                    break
                if rj < best_cost:
                    best_cost = rj
                    entering = j
        if entering is None:
            return
        leaving = None
        best = None
        for i in range(len(tab)):
            if tab[i][entering] > 0:
                ratio = tab[i][-1] / tab[i][entering]
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leaving])
                ):
                    best = ratio
                    leaving = i
        if leaving is None:
            raise UnboundedError("no leaving row for entering column")
        _pivot(tab, basis, obj, leaving, entering)


def _pivot(tab, basis, obj, row: int, col: int) -> None:
    pr = tab[row]
    inv = Fraction(1) / pr[col]
    if inv != 1:
        tab[row] = pr = [v * inv for v in pr]
    for i in range(len(tab)):
        if i == row:
            continue
        factor = tab[i][col]
        if factor:
            tab[i] = [vi - factor * vp for vi, vp in zip(tab[i], pr)]
    if obj is not None:
        factor = obj[col]
        if factor:
            nxt = [vi - factor * vp for vi, vp in zip(obj, pr)]
            obj[:] = nxt
    basis[row] = col
