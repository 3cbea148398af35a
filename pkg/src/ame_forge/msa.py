"""Magic solution arrays and the tripartite AME states they encode.

An ``l x m`` array ``y`` of nonnegative rationals is a magic solution
array (MSA) for the system ``l x m x n`` when

* every row sums to 1,
* every column sums to ``l/m``,
* every wrapped diagonal ``{(k, j) : (j + s_k) mod n = c}`` sums to ``l/n``,

with ``s_k = k``.  The state
``(1/sqrt(l)) sum_{k,j} sqrt(y[k][j]) |k>|j>|(j + s_k) mod n>``
then has all three single-party marginals maximally mixed.

Row shifts other than ``s_k = k`` are accepted in relaxed mode.  With
``l = 2`` and shifts ``(0, n')`` the same equations are the coefficient
system of the ``2 x m x (m + n')`` family.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, ParameterError, PreconditionError
from .simplex import check_farkas, equalities_consistent, find_feasible_point
from .tensor import Amplitude, PureState


class MsaRegimeWarning(UserWarning):
    """Dimensions fall outside ``3 <= l < m < n <= m + l - 1``."""


def in_standard_regime(l: int, m: int, n: int) -> bool:
    return 3 <= l < m < n <= m + l - 1


@dataclass(frozen=True)
class MsaProblem:
    l: int
    m: int
    n: int
    shifts: tuple[int, ...] | None = None
    relaxed: bool = False

    def __post_init__(self):
        for name in ("l", "m", "n"):
            if int(getattr(self, name)) < 1:
                raise ParameterError(f"{name} must be a positive integer")
        if self.shifts is not None:
            shifts = tuple(int(s) for s in self.shifts)
            if len(shifts) != self.l:
                raise ParameterError(f"need {self.l} row shifts, got {len(shifts)}")
            object.__setattr__(self, "shifts", None if shifts == tuple(range(self.l)) else shifts)
        if not self.relaxed and (self.shifts is not None or not in_standard_regime(self.l, self.m, self.n)):
            warnings.warn(
                f"({self.l},{self.m},{self.n}) is outside 3 <= l < m < n <= m+l-1; "
                "pass relaxed=True to silence",
                MsaRegimeWarning,
                stacklevel=3,
            )

    def shift(self, k: int) -> int:
        return k if self.shifts is None else self.shifts[k]

    def diagonal(self, k: int, j: int) -> int:
        return (j + self.shift(k)) % self.n

    def constraints(self) -> tuple[list[str], list[list[Fraction]], list[Fraction]]:
        """Labels, coefficient rows and right-hand sides; variable ``k*m + j`` is ``y[k][j]``."""
        l, m, n = self.l, self.m, self.n
        labels, rows, rhs = [], [], []
        zero = Fraction(0)
        for k in range(l):
            row = [zero] * (l * m)
            for j in range(m):
                row[k * m + j] = Fraction(1)
            labels.append(f"row {k}")
            rows.append(row)
            rhs.append(Fraction(1))
        for j in range(m):
            row = [zero] * (l * m)
            for k in range(l):
                row[k * m + j] = Fraction(1)
            labels.append(f"column {j}")
            rows.append(row)
            rhs.append(Fraction(l, m))
        for c in range(n):
            row = [zero] * (l * m)
            for k in range(l):
                for j in range(m):
                    if self.diagonal(k, j) == c:
                        row[k * m + j] = Fraction(1)
            labels.append(f"diagonal {c}")
            rows.append(row)
            rhs.append(Fraction(l, n))
        return labels, rows, rhs

    def to_dict(self) -> dict:
        d = {"l": self.l, "m": self.m, "n": self.n}
        if self.shifts is not None:
            d["shifts"] = list(self.shifts)
        return d


@dataclass(frozen=True)
class Violation:
    constraint: str
    residual: Fraction

    def __str__(self) -> str:
        return f"{self.constraint}: residual {self.residual}"


@dataclass(frozen=True)
class MsaCheck:
    valid: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class MagicSolutionArray:
    problem: MsaProblem
    y: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(tuple(Fraction(v) for v in row) for row in self.y))

    def to_dict(self) -> dict:
        d = self.problem.to_dict()
        d["y"] = [[str(v) for v in row] for row in self.y]
        return d

    @classmethod
    def from_dict(cls, data, relaxed: bool = True) -> "MagicSolutionArray":
        problem = MsaProblem(data["l"], data["m"], data["n"], data.get("shifts"), relaxed=relaxed)
        return cls(problem, [[Fraction(v) for v in row] for row in data["y"]])


@dataclass(frozen=True)
class MsaInfeasible:
    """Infeasibility verdict with a Farkas vector over :meth:`MsaProblem.constraints`."""

    problem: MsaProblem
    farkas: tuple[Fraction, ...] = field(default=())

    def check(self) -> bool:
        _, rows, rhs = self.problem.constraints()
        return check_farkas(rows, rhs, self.farkas)

    def to_dict(self) -> dict:
        d = self.problem.to_dict()
        d.update(infeasible=True, farkas=[str(v) for v in self.farkas])
        return d


def verify_msa(arr: MagicSolutionArray) -> MsaCheck:
    """Check the row, column and diagonal sums and nonnegativity exactly."""
    p = arr.problem
    if len(arr.y) != p.l or any(len(row) != p.m for row in arr.y):
        shape = (len(arr.y), len(arr.y[0]) if arr.y else 0)
        raise DimensionError(f"array of shape {shape} does not match {p.l}x{p.m}")
    violations = []
    for k, row in enumerate(arr.y):
        for j, v in enumerate(row):
            if v < 0:
                violations.append(Violation(f"nonnegative ({k},{j})", v))
    labels, rows, rhs = p.constraints()
    flat = [v for row in arr.y for v in row]
    for label, coeffs, target in zip(labels, rows, rhs):
        residual = sum((c * v for c, v in zip(coeffs, flat) if c), Fraction(0)) - target
        if residual:
            violations.append(Violation(label, residual))
    return MsaCheck(not violations, tuple(violations))


def msa_equations_consistent(problem: MsaProblem) -> bool:
    _, rows, rhs = problem.constraints()
    return equalities_consistent(rows, rhs)


def solve_msa(problem: MsaProblem) -> MagicSolutionArray | MsaInfeasible:
    """Find a vertex of the MSA polytope, or certify that it is empty."""
    _, rows, rhs = problem.constraints()
    result = find_feasible_point(rows, rhs)
    if not result.feasible:
        return MsaInfeasible(problem, result.farkas)
    m = problem.m
    y = [result.point[k * m:(k + 1) * m] for k in range(problem.l)]
    return MagicSolutionArray(problem, y)


def msa_to_state(arr: MagicSolutionArray) -> PureState:
    """Tripartite state ``(1/sqrt(l)) sum sqrt(y[k][j]) |k, j, (j + s_k) mod n>``."""
    check = verify_msa(arr)
    if not check:
        raise PreconditionError(f"not a magic solution array: {check.violations[0]}")
    p = arr.problem
    amps = {}
    for k, row in enumerate(arr.y):
        for j, v in enumerate(row):
            if v:
                amps[(k, j, p.diagonal(k, j))] = Amplitude.from_exact(v / p.l)
    return PureState((p.l, p.m, p.n), amps)


def worked_example_array() -> MagicSolutionArray:
    """The worked 3x4x5 array with entries in fortieths."""
    rows = [[12, 24, 4, 0], [0, 2, 20, 18], [18, 4, 6, 12]]
    return MagicSolutionArray(MsaProblem(3, 4, 5), [[Fraction(v, 40) for v in r] for r in rows])


def standard_regime_triples(l_max: int, m_max: int) -> list[tuple[int, int, int]]:
    return [
        (l, m, n)
        for l in range(3, l_max + 1)
        for m in range(l + 1, m_max + 1)
        for n in range(m + 1, m + l)
    ]


def two_m_mn_problem(m: int, n: int) -> MsaProblem:
    """Coefficient system of ``2 x m x (m+n)`` states ``|0,j,j>`` / ``|1,j,j+n>``."""
    return MsaProblem(2, m, m + n, shifts=(0, n), relaxed=True)


def as_array(values: Sequence[Sequence], problem: MsaProblem) -> MagicSolutionArray:
    return MagicSolutionArray(problem, [[Fraction(v) for v in row] for row in values])
