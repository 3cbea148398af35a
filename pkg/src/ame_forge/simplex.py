"""Exact phase-I simplex for ``A y = b, y >= 0``.

Arithmetic is over :class:`fractions.Fraction` throughout.  Pivoting uses
Bland's rule (lowest-index entering column, lowest-index leaving basic
variable on ratio ties), which rules out cycling on the degenerate
polytopes that arise from redundant equality systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    point: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None
    pivots: int = 0


def _to_fractions(A, b):
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    if len(A) != len(b):
        raise ValueError(f"{len(A)} constraint rows but {len(b)} right-hand sides")
    n = len(A[0]) if A else 0
    if any(len(row) != n for row in A):
        raise ValueError("ragged constraint matrix")
    return A, b, n


def _integral(z: Sequence[Fraction]) -> tuple[Fraction, ...]:
    scale = lcm(*(q.denominator for q in z)) if z else 1
    return tuple(Fraction(q * scale) for q in z)


def check_farkas(A, b, z) -> bool:
    """True iff ``z`` proves ``{A y = b, y >= 0}`` empty: ``A^T z >= 0`` and ``b.z < 0``."""
    A, b, n = _to_fractions(A, b)
    z = [Fraction(v) for v in z]
    if len(z) != len(b):
        return False
    if sum(zi * bi for zi, bi in zip(z, b)) >= 0:
        return False
    return all(sum(z[i] * A[i][j] for i in range(len(A))) >= 0 for j in range(n))


def find_feasible_point(A, b) -> FeasibilityResult:
    """Decide ``{y : A y = b, y >= 0}`` exactly.

    Returns a basic feasible point, or a Farkas vector ``z`` with
    ``A^T z >= 0`` and ``b.z < 0`` when the set is empty.
    """
    A, b, n = _to_fractions(A, b)
    m = len(A)
    if m == 0:
        return FeasibilityResult(True, tuple(Fraction(0) for _ in range(n)))

    # rows flipped so that b >= 0; artificial slack i sits in column n + i
    sign = [-1 if bi < 0 else 1 for bi in b]
    width = n + m
    rows = []
    for i in range(m):
        row = [sign[i] * v for v in A[i]] + [Fraction(0)] * m
        row[n + i] = Fraction(1)
        rows.append(row)
    rhs = [sign[i] * b[i] for i in range(m)]
    basis = [n + i for i in range(m)]

    # phase-I reduced costs: artificials cost 1, originals 0
    cost = [-sum(rows[i][j] for i in range(m)) for j in range(n)] + [Fraction(0)] * m

    pivots = 0
    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        leave, best = None, None
        for i in range(m):
            a = rows[i][entering]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        # the phase-I objective is bounded below by 0, so a leaving row exists
        assert leave is not None

        prow = rows[leave]
        piv = prow[entering]
        if piv != 1:
            prow[:] = [v / piv for v in prow]
            rhs[leave] /= piv
        nz = [j for j in range(width) if prow[j]]
        for i in range(m):
            f = rows[i][entering]
            if i != leave and f:
                r = rows[i]
                for j in nz:
                    r[j] -= f * prow[j]
                rhs[i] -= f * rhs[leave]
        f = cost[entering]
        for j in nz:
            cost[j] -= f * prow[j]
        basis[leave] = entering
        pivots += 1

    residual = sum(rhs[i] for i in range(m) if basis[i] >= n)
    if residual > 0:
        # reduced cost of artificial i is 1 - u_i with u the phase-I dual
        u = [1 - cost[n + i] for i in range(m)]
        z = [-sign[i] * u[i] for i in range(m)]
        return FeasibilityResult(False, farkas=_integral(z), pivots=pivots)

    point = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            point[j] = rhs[i]
    return FeasibilityResult(True, point=tuple(point), pivots=pivots)


def rational_rank(rows) -> int:
    """Rank of a rational matrix by fraction-exact Gaussian elimination."""
    mat = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    n_cols = len(mat[0]) if mat else 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        p = mat[rank]
        for r in range(rank + 1, len(mat)):
            f = mat[r][col] / p[col]
            if f:
                mat[r] = [x - f * y for x, y in zip(mat[r], p)]
        rank += 1
    return rank


def equalities_consistent(A, b) -> bool:
    """Rouche-Capelli test: ``rank(A) == rank([A | b])``."""
    return rational_rank(A) == rational_rank([list(row) + [bi] for row, bi in zip(A, b)])
