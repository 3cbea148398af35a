"""Coefficient-matrix reshapings: multi-isometry and multiunitarity.

A ``(2k+1)``-index tensor ``a`` is a *k-isometry* when, for every choice
of ``k`` column indices, the reshaped matrix ``A`` (rows: the other
``k+1`` indices) satisfies ``A^dagger A = c I``.  The state with
amplitudes ``a`` is then an unnormalized AME state, because every
``k``-party marginal of it equals ``A^dagger A`` up to transposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import DimensionError, InvalidSubsetError, NormalizationError, PartyCountError, ShapeMismatchError
from .tensor import PureState, all_indices, coefficient_matrix

PROPORTIONALITY_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class CoefficientMatrixView:
    """``matrix[mu, nu] = a[mu..., nu...]`` with rows over ``row_parties``.

    ``dims`` holds the local dimension of every party, indexed by party.
    """

    row_parties: tuple[int, ...]
    col_parties: tuple[int, ...]
    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        rows, cols = tuple(self.row_parties), tuple(self.col_parties)
        dims = tuple(int(d) for d in self.dims)
        if sorted(rows + cols) != list(range(len(dims))):
            raise InvalidSubsetError(f"rows {rows} and columns {cols} do not partition {len(dims)} parties")
        mat = np.asarray(self.matrix, dtype=complex)
        expected = (math.prod(dims[p] for p in rows), math.prod(dims[p] for p in cols))
        if mat.shape != expected:
            raise DimensionError(f"matrix shape {mat.shape} does not match {expected}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("matrix entries must be finite")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, "row_parties", rows)
        object.__setattr__(self, "col_parties", cols)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_state(cls, state: PureState, col_parties: Sequence[int]) -> "CoefficientMatrixView":
        cols = tuple(sorted(int(p) for p in col_parties))
        rows = tuple(p for p in range(state.n_parties) if p not in cols)
        return cls(rows, cols, state.dims, coefficient_matrix(state, rows))

    @classmethod
    def from_matrix(cls, matrix, row_dims: Sequence[int], col_dims: Sequence[int]) -> "CoefficientMatrixView":
        """Rows become parties ``0..len(row_dims)-1``, columns the parties after them."""
        nr = len(row_dims)
        dims = tuple(row_dims) + tuple(col_dims)
        return cls(tuple(range(nr)), tuple(range(nr, len(dims))), dims, matrix)

    def gram(self) -> np.ndarray:
        """``A^dagger A``."""
        return self.matrix.conj().T @ self.matrix


@dataclass(frozen=True)
class SplitReport:
    col_parties: tuple[int, ...]
    col_dim: int
    trace: float
    constant: float
    exact_constant: Fraction | None
    deviation: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "col_parties": list(self.col_parties),
            "col_dim": self.col_dim,
            "trace": self.trace,
            "constant": self.constant,
            "exact_constant": None if self.exact_constant is None else str(self.exact_constant),
            "deviation": self.deviation,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class IsometryVerdict:
    k: int
    dims: tuple[int, ...]
    splits: tuple[SplitReport, ...]
    trace_consistent: bool
    passed: bool

    @property
    def constants(self) -> list[float]:
        return [s.constant for s in self.splits]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "dims": list(self.dims),
            "passed": self.passed,
            "trace_consistent": self.trace_consistent,
            "splits": [s.to_dict() for s in self.splits],
        }


def _split_report(state: PureState, cols: tuple[int, ...], rtol: float) -> SplitReport:
    view = CoefficientMatrixView.from_state(state, cols)
    gram = view.gram()
    dim = gram.shape[0]
    trace = float(np.trace(gram).real)
    c = trace / dim
    dev = float(np.max(np.abs(gram - c * np.eye(dim))))
    exact_norm = state.exact_norm_squared()
    exact_c = None if exact_norm is None else exact_norm / dim
    return SplitReport(cols, dim, trace, c, exact_c, dev, c > 0 and dev <= rtol * c)


def _all_splits(state: PureState, k: int, rtol: float) -> tuple[tuple[SplitReport, ...], bool]:
    splits = tuple(_split_report(state, cols, rtol) for cols in combinations(range(state.n_parties), k))
    traces = [s.trace for s in splits]
    consistent = max(traces) - min(traces) <= rtol * max(max(traces), 1.0)
    return splits, consistent


def check_k_isometry(state: PureState, k: int, tol: float = PROPORTIONALITY_RTOL) -> IsometryVerdict:
    """Test ``A^dagger A`` against ``c I`` for all ``C(2k+1, k)`` column choices.

    ``tol`` is relative to ``c``.  Unnormalized states are fine: the
    constant of a split is ``|a|^2 / (column dimension)``.
    """
    if k < 1 or state.n_parties != 2 * k + 1:
        raise PartyCountError(f"a {k}-isometry needs {2 * k + 1} parties, got {state.n_parties}")
    splits, consistent = _all_splits(state, k, tol)
    return IsometryVerdict(k, state.dims, splits, consistent, consistent and all(s.passed for s in splits))


@dataclass(frozen=True)
class UnitaryVerdict:
    k: int
    dims: tuple[int, ...]
    splits: tuple[SplitReport, ...]
    scale: float
    passed: bool

    @property
    def strictly_unitary(self) -> bool:
        """Every reshaping is unitary, not only proportional to one."""
        return self.passed and abs(self.scale - 1.0) <= PROPORTIONALITY_RTOL

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "dims": list(self.dims),
            "passed": self.passed,
            "scale": self.scale,
            "strictly_unitary": self.strictly_unitary,
            "splits": [s.to_dict() for s in self.splits],
        }


def check_k_unitary(state: PureState, k: int, tol: float = PROPORTIONALITY_RTOL) -> UnitaryVerdict:
    """Every balanced reshaping of a ``2k``-party tensor is unitary up to one common scale.

    The scale is ``|a|^2 / d^k``; it is 1 for unnormalized tensors such
    as ``sum_j |jj>``.
    """
    if k < 1 or state.n_parties != 2 * k:
        raise PartyCountError(f"k-unitarity needs {2 * k} parties, got {state.n_parties}")
    if len(set(state.dims)) != 1:
        raise ShapeMismatchError(f"k-unitarity needs equal local dimensions, got {state.dims}")
    splits, consistent = _all_splits(state, k, tol)
    scale = splits[0].constant if splits else 0.0
    return UnitaryVerdict(k, state.dims, splits, scale, consistent and all(s.passed for s in splits))


def state_from_isometry(view: CoefficientMatrixView) -> PureState:
    """The normalized state ``sum a[mu, nu] |mu, nu>`` in party order."""
    mat = view.matrix
    norm2 = float(np.sum(np.abs(mat) ** 2))
    if norm2 == 0.0:
        raise NormalizationError("zero coefficient matrix")
    row_dims = [view.dims[p] for p in view.row_parties]
    col_dims = [view.dims[p] for p in view.col_parties]
    scale = 1 / math.sqrt(norm2)
    amps = {}
    for r, mu in enumerate(all_indices(row_dims)):
        for c, nu in enumerate(all_indices(col_dims)):
            v = mat[r, c]
            if v != 0:
                idx = [0] * len(view.dims)
                for p, i in zip(view.row_parties, mu):
                    idx[p] = i
                for p, i in zip(view.col_parties, nu):
                    idx[p] = i
                amps[tuple(idx)] = complex(v) * scale
    return PureState(view.dims, amps)
