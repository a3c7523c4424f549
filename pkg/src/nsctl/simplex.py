"""Phase-1 simplex over exact rationals.

Decides feasibility of ``A x = b, x >= 0``. On success it returns a basic
feasible solution; otherwise a Farkas vector ``y`` with ``y.A <= 0``
componentwise and ``y.b > 0``.

The tableau carries one artificial column per row and keeps it for the
whole run, so the inverse basis (and hence the phase-1 dual) can be read
off the objective row at the end. Pivoting follows Bland's rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Feasible:
    x: tuple
    basis: tuple
    pivots: int


@dataclass(frozen=True)
class Infeasible:
    y: tuple
    objective: Fraction
    pivots: int


def phase_one(A: Sequence[Sequence], b: Sequence) -> Feasible | Infeasible:
    m = len(A)
    n = len(A[0]) if m else 0
    if len(b) != m or any(len(row) != n for row in A):
        raise ValueError("inconsistent LP dimensions")

    signs = []
    rows = []
    for i in range(m):
        s = -1 if b[i] < 0 else 1
        signs.append(s)
        row = [Fraction(v) * s for v in A[i]]
        row.extend(Fraction(int(k == i)) for k in range(m))
        row.append(Fraction(b[i]) * s)
        rows.append(row)
    width = n + m + 1
    rhs = width - 1
    basis = [n + i for i in range(m)]

    # reduced costs for min sum(artificials); last slot holds -objective
    cost = [_ZERO] * width
    for j in range(n):
        cost[j] = -sum((rows[i][j] for i in range(m)), _ZERO)
    cost[rhs] = -sum((rows[i][rhs] for i in range(m)), _ZERO)

    pivots = 0
    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            t = rows[i][enter]
            if t > 0:
                ratio = rows[i][rhs] / t
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    leave, best = i, ratio
        # phase-1 objective is bounded below, so a leaving row always exists
        _pivot(rows, cost, leave, enter)
        basis[leave] = enter
        pivots += 1

    objective = -cost[rhs]
    if objective == 0:
        x = [_ZERO] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = rows[i][rhs]
        return Feasible(tuple(x), tuple(basis), pivots)

    # artificial k has cost 1, so its reduced cost is 1 - y_k
    y = tuple(signs[k] * (1 - cost[n + k]) for k in range(m))
    return Infeasible(y, objective, pivots)


def _pivot(rows, cost, r, c):
    prow = rows[r]
    inv = 1 / prow[c]
    nz = [k for k, v in enumerate(prow) if v]
    for k in nz:
        prow[k] *= inv
    for i, row in enumerate(rows):
        if i == r:
            continue
        f = row[c]
        if f:
            for k in nz:
                row[k] -= f * prow[k]
    f = cost[c]
    if f:
        for k in nz:
            cost[k] -= f * prow[k]
