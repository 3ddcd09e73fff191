"""Exact two-phase simplex over rationals for small dense equality-form LPs.

Solves min/max of c.x subject to A x = b, x >= 0 with every coefficient a
Fraction.  Pivot selection uses Bland's smallest-index rule throughout,
which rules out cycling and makes the solver fully deterministic; all
arithmetic is exact.  Sized for the fractional-partition programs in this
package (tens of rows, up to ~1000 columns), not as general-purpose LP
code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class LPError(Exception):
    pass


class LPInfeasible(LPError):
    pass


class LPUnbounded(LPError):
    pass


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]


def _pivot(tab: list[list[Fraction]], basis: list[int], prow: int, pcol: int) -> None:
    row = tab[prow]
    piv = row[pcol]
    inv = 1 / piv
    for j in range(len(row)):
        row[j] *= inv
    for i, r in enumerate(tab):
        if i != prow and r[pcol]:
            f = r[pcol]
            for j in range(len(r)):
                r[j] -= f * row[j]
    basis[prow] = pcol


def _bland_optimize(
    tab: list[list[Fraction]],
    basis: list[int],
    obj: list[Fraction],
    n_enterable: int,
) -> None:
    """Minimize, pivoting until every reduced cost over the first
    ``n_enterable`` columns is nonnegative.  ``obj`` is the reduced-cost
    row and participates in eliminations."""
    n_rows = len(tab)
    while True:
        pcol = -1
        for j in range(n_enterable):
            if obj[j] < 0:
                pcol = j
                break
        if pcol < 0:
            return
        prow = -1
        best: Fraction | None = None
        for i in range(n_rows):
            a = tab[i][pcol]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[prow]):
                    prow = i
                    best = ratio
        if prow < 0:
            raise LPUnbounded("objective is unbounded on the feasible region")
        _pivot(tab, basis, prow, pcol)
        f = obj[pcol]
        if f:
            row = tab[prow]
            for j in range(len(obj)):
                obj[j] -= f * row[j]


def solve_eq_lp(
    a_rows: Sequence[Sequence], b: Sequence, c: Sequence, *, maximize: bool = False
) -> LPResult:
    """Solve min (or max) c.x subject to A x = b, x >= 0 exactly.

    Raises :class:`LPInfeasible` / :class:`LPUnbounded` accordingly.
    Redundant equality rows are tolerated (dropped after phase one).
    """
    n_rows = len(a_rows)
    n = len(c)
    cost = [Fraction(-v if maximize else v) for v in c]
    tab: list[list[Fraction]] = []
    for i in range(n_rows):
        row = [Fraction(v) for v in a_rows[i]]
        if len(row) != n:
            raise ValueError("constraint row length does not match objective")
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        # artificial columns occupy n..n+n_rows-1
        row.extend(Fraction(1) if k == i else Fraction(0) for k in range(n_rows))
        row.append(rhs)
        tab.append(row)

    basis = [n + i for i in range(n_rows)]
    width = n + n_rows + 1

    # phase one: minimize the artificial sum; its reduced costs are the
    # negated column sums of the original columns.
    obj = [Fraction(0)] * width
    for j in range(n):
        obj[j] = -sum(tab[i][j] for i in range(n_rows))
    _bland_optimize(tab, basis, obj, n)

    if any(basis[i] >= n and tab[i][-1] != 0 for i in range(n_rows)):
        raise LPInfeasible("equality constraints are inconsistent")

    # drive zero-valued artificials out of the basis; rows with no original
    # coefficient left are redundant constraints.
    drop: list[int] = []
    for i in range(n_rows):
        if basis[i] >= n:
            pcol = next((j for j in range(n) if tab[i][j] != 0), -1)
            if pcol >= 0:
                _pivot(tab, basis, i, pcol)
            else:
                drop.append(i)
    for i in reversed(drop):
        del tab[i]
        del basis[i]
    for row in tab:
        del row[n:-1]

    # phase two: reduced costs of the true objective under the current basis
    obj = [*cost, Fraction(0)]
    for i, bi in enumerate(basis):
        f = obj[bi]
        if f:
            row = tab[i]
            for j in range(n + 1):
                obj[j] -= f * row[j]
    _bland_optimize(tab, basis, obj, n)

    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = tab[i][-1]
    value = sum((cost[j] * x[j] for j in range(n)), Fraction(0))
    if maximize:
        value = -value
    return LPResult(value=value, x=tuple(x))
