"""Sparse pure states over heterogeneous multipartite systems.

A :class:`PureState` stores only its nonzero amplitudes, keyed by index
tuples ``(i_1, ..., i_n)`` with ``0 <= i_j < d_j``.  Linear indices are
row-major over party order, and whenever two parties are fused into one
the composite index is ``i_first * d_second + i_second``.

Amplitudes may carry an exact annotation ``sqrt(r) * exp(2*pi*i*p/q)``
with ``r`` and ``p/q`` rational.  Every closed-form construction in this
package produces amplitudes of that form, which lets marginal diagonals
be checked in exact arithmetic.  The complex value is always the
authoritative one.
"""

from __future__ import annotations

import cmath
import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy import sparse

from .errors import (
    DimensionError,
    InvalidPairingError,
    InvalidSubsetError,
    NormalizationError,
    ShapeMismatchError,
)

DEFAULT_TOL = 1e-12
SPECTRAL_TOL = 1e-10
EXACT_RTOL = 1e-14
TOL_ENV_VAR = "AME_FORGE_TOL"

_MAX_TOTAL_DIM = 2**62


def default_tol() -> float:
    """Numeric tolerance, overridable through ``AME_FORGE_TOL``."""
    env = os.environ.get(TOL_ENV_VAR)
    return float(env) if env else DEFAULT_TOL


def format_fraction(q: Fraction) -> str:
    return str(Fraction(q))


@dataclass(frozen=True)
class SystemShape:
    """Ordered local dimensions ``d_1 x ... x d_n``."""

    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if not dims:
            raise DimensionError("a system needs at least one party")
        if any(d < 1 for d in dims):
            raise DimensionError(f"local dimensions must be positive, got {dims}")
        if math.prod(dims) >= _MAX_TOTAL_DIM:
            raise DimensionError(f"total dimension of {dims} overflows the index width")
        object.__setattr__(self, "dims", dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __iter__(self) -> Iterator[int]:
        return iter(self.dims)

    def __getitem__(self, i):
        return self.dims[i]

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    @property
    def is_homogeneous(self) -> bool:
        return len(set(self.dims)) == 1

    def sub(self, parties: Sequence[int]) -> "SystemShape":
        return SystemShape(self.dims[p] for p in parties)

    def __str__(self) -> str:
        return "x".join(map(str, self.dims))


def as_shape(dims) -> SystemShape:
    return dims if isinstance(dims, SystemShape) else SystemShape(dims)


def _phase_value(phase: Fraction) -> complex:
    # quarter turns are produced exactly so real states stay real
    if (4 * phase).denominator == 1:
        return (1, 1j, -1, -1j)[int(4 * phase) % 4]
    return cmath.exp(2j * math.pi * float(phase))


@dataclass(frozen=True)
class ExactAmplitude:
    """``sqrt(radicand) * exp(2*pi*i*phase)``; phase is stored mod 1."""

    radicand: Fraction
    phase: Fraction = Fraction(0)

    def __post_init__(self):
        r = Fraction(self.radicand)
        if r < 0:
            raise ValueError(f"radicand must be nonnegative, got {r}")
        object.__setattr__(self, "radicand", r)
        object.__setattr__(self, "phase", Fraction(self.phase) % 1)

    def __complex__(self) -> complex:
        r = self.radicand
        mod = math.sqrt(r.numerator) / math.sqrt(r.denominator)
        return complex(mod * _phase_value(self.phase))

    def __mul__(self, other: "ExactAmplitude") -> "ExactAmplitude":
        return ExactAmplitude(self.radicand * other.radicand, self.phase + other.phase)

    def scaled(self, radicand_factor: Fraction) -> "ExactAmplitude":
        """Multiply by ``sqrt(radicand_factor)``."""
        return ExactAmplitude(self.radicand * radicand_factor, self.phase)

    def to_dict(self) -> dict:
        return {"radicand": format_fraction(self.radicand), "phase": format_fraction(self.phase)}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ExactAmplitude":
        return cls(Fraction(d["radicand"]), Fraction(d.get("phase", "0")))


@dataclass(frozen=True)
class Amplitude:
    value: complex
    exact: ExactAmplitude | None = None

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        if self.exact is not None:
            ref = complex(self.exact)
            if abs(self.value - ref) > EXACT_RTOL * max(abs(ref), 1e-300):
                raise ValueError(
                    f"amplitude {self.value} disagrees with its exact form {self.exact}"
                )

    @classmethod
    def from_exact(cls, radicand, phase=0) -> "Amplitude":
        ex = ExactAmplitude(Fraction(radicand), Fraction(phase))
        return cls(complex(ex), ex)

    def __mul__(self, other: "Amplitude") -> "Amplitude":
        if self.exact is not None and other.exact is not None:
            ex = self.exact * other.exact
            return Amplitude(complex(ex), ex)
        return Amplitude(self.value * other.value)


def _as_amplitude(a) -> Amplitude:
    if isinstance(a, Amplitude):
        return a
    if isinstance(a, ExactAmplitude):
        return Amplitude(complex(a), a)
    return Amplitude(complex(a))


class PureState:
    """Sparse amplitude tensor over a :class:`SystemShape`.

    Zero amplitudes are dropped and the remaining ones are kept in
    lexicographic index order, so two states with the same content
    compare equal.  Normalization is not forced here; operations that
    need a normalized state check it themselves.
    """

    def __init__(self, dims, amplitudes: Mapping[Sequence[int], object]):
        shape = as_shape(dims)
        amps: dict[tuple[int, ...], Amplitude] = {}
        for idx, a in amplitudes.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != len(shape):
                raise DimensionError(f"index {idx} does not match shape {shape}")
            if any(not 0 <= i < d for i, d in zip(idx, shape.dims)):
                raise DimensionError(f"index {idx} out of range for shape {shape}")
            amp = _as_amplitude(a)
            if amp.value != 0:
                amps[idx] = amp
        self.shape = shape
        self._amps = dict(sorted(amps.items()))

    # construction helpers

    @classmethod
    def from_vector(cls, dims, vector, atol: float = 0.0) -> "PureState":
        shape = as_shape(dims)
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        if vec.size != shape.total:
            raise DimensionError(f"vector of length {vec.size} does not fit shape {shape}")
        nz = np.flatnonzero(np.abs(vec) > atol)
        idx = np.array(np.unravel_index(nz, shape.dims)).T
        return cls(shape, {tuple(i): vec[k] for i, k in zip(idx.tolist(), nz)})

    @classmethod
    def basis(cls, dims, index: Sequence[int]) -> "PureState":
        return cls(dims, {tuple(index): Amplitude.from_exact(1)})

    # accessors

    @property
    def dims(self) -> tuple[int, ...]:
        return self.shape.dims

    @property
    def n_parties(self) -> int:
        return len(self.shape)

    def __len__(self) -> int:
        return len(self._amps)

    def items(self):
        return self._amps.items()

    def amplitude(self, index: Sequence[int]) -> complex:
        a = self._amps.get(tuple(index))
        return 0j if a is None else a.value

    @property
    def is_exact(self) -> bool:
        return all(a.exact is not None for a in self._amps.values())

    @cached_property
    def index_array(self) -> np.ndarray:
        arr = np.array(list(self._amps), dtype=np.int64)
        return arr.reshape(len(self._amps), self.n_parties)

    @cached_property
    def values(self) -> np.ndarray:
        return np.array([a.value for a in self._amps.values()], dtype=complex)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))

    def exact_norm_squared(self) -> Fraction | None:
        if not self.is_exact:
            return None
        return sum((a.exact.radicand for a in self._amps.values()), Fraction(0))

    def is_normalized(self, tol: float | None = None) -> bool:
        tol = default_tol() if tol is None else tol
        return abs(self.norm_squared() - 1.0) <= tol

    def require_normalized(self, tol: float | None = None) -> None:
        if not self.is_normalized(tol):
            raise NormalizationError(
                f"state has squared norm {self.norm_squared()!r}, expected 1"
            )

    def normalized(self) -> "PureState":
        exact_norm = self.exact_norm_squared()
        if exact_norm is not None:
            inv = 1 / exact_norm
            return PureState(
                self.shape, {i: _as_amplitude(a.exact.scaled(inv)) for i, a in self.items()}
            )
        norm = math.sqrt(self.norm_squared())
        return PureState(self.shape, {i: a.value / norm for i, a in self.items()})

    def to_vector(self) -> np.ndarray:
        vec = np.zeros(self.shape.total, dtype=complex)
        if len(self):
            vec[np.ravel_multi_index(self.index_array.T, self.dims)] = self.values
        return vec

    def to_tensor(self) -> np.ndarray:
        return self.to_vector().reshape(self.dims)

    # comparison and serialization

    def __eq__(self, other) -> bool:
        if not isinstance(other, PureState):
            return NotImplemented
        return self.shape == other.shape and self._amps == other._amps

    def __hash__(self):
        return hash((self.shape, tuple(self._amps.items())))

    def __repr__(self) -> str:
        return f"PureState(dims={self.dims}, nnz={len(self)})"

    def to_dict(self) -> dict:
        entries = []
        for idx, a in self.items():
            entry = {"index": list(idx), "re": a.value.real, "im": a.value.imag}
            if a.exact is not None:
                entry["exact"] = a.exact.to_dict()
            entries.append(entry)
        return {"dims": list(self.dims), "amplitudes": entries}

    @classmethod
    def from_dict(cls, data: Mapping) -> "PureState":
        amps = {}
        for entry in data["amplitudes"]:
            idx = tuple(entry["index"])
            if idx in amps:
                raise ValueError(f"duplicate amplitude index {idx}")
            value = complex(entry.get("re", 0.0), entry.get("im", 0.0))
            exact = entry.get("exact")
            amps[idx] = Amplitude(value, ExactAmplitude.from_dict(exact) if exact else None)
        return cls(data["dims"], amps)

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "PureState":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Reduced density matrix on the retained parties ``parties``."""

    dims: SystemShape
    matrix: np.ndarray
    parties: tuple[int, ...] = ()

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        side = self.dims.total
        if mat.shape != (side, side):
            raise DimensionError(f"matrix shape {mat.shape} does not match dims {self.dims}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def side(self) -> int:
        return self.dims.total

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def check(self, tol: float = DEFAULT_TOL, spectral_tol: float = SPECTRAL_TOL) -> bool:
        return (
            self.hermiticity_error() <= tol
            and abs(self.trace() - 1) <= tol
            and self.eigenvalues().min() >= -spectral_tol
        )

    def deviation_from_maximally_mixed(self) -> float:
        """Max-abs entrywise distance from ``I / D``."""
        target = np.eye(self.side) / self.side
        return float(np.max(np.abs(self.matrix - target)))

    def trace_distance_from_maximally_mixed(self) -> float:
        diff = self.matrix - np.eye(self.side) / self.side
        return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2))))


def _check_subset(parties: Sequence[int], n: int, *, allow_full: bool = False) -> tuple[int, ...]:
    parties = tuple(int(p) for p in parties)
    if not parties:
        raise InvalidSubsetError("party subset must be nonempty")
    if len(set(parties)) != len(parties):
        raise InvalidSubsetError(f"duplicate parties in {parties}")
    if any(not 0 <= p < n for p in parties):
        raise InvalidSubsetError(f"parties {parties} out of range for {n} parties")
    if len(parties) == n and not allow_full:
        raise InvalidSubsetError("subset must be a strict subset of the parties")
    return parties


def coefficient_matrix(state: PureState, row_parties: Sequence[int], *, as_sparse: bool = False):
    """Reshape amplitudes into a (rows x cols) matrix.

    Rows run over ``row_parties`` in the given order, columns over the
    remaining parties in increasing order.
    """
    n = state.n_parties
    rows = tuple(row_parties)
    cols = tuple(p for p in range(n) if p not in rows)
    row_dims = tuple(state.dims[p] for p in rows)
    col_dims = tuple(state.dims[p] for p in cols)
    n_rows, n_cols = math.prod(row_dims), math.prod(col_dims)
    idx = state.index_array
    r = np.ravel_multi_index(idx[:, rows].T, row_dims) if rows else np.zeros(len(state), np.int64)
    c = np.ravel_multi_index(idx[:, cols].T, col_dims) if cols else np.zeros(len(state), np.int64)
    mat = sparse.coo_matrix((state.values, (r, c)), shape=(n_rows, n_cols)).tocsr()
    return mat if as_sparse else mat.toarray()


def partial_trace(state: PureState, keep: Sequence[int], tol: float | None = None) -> DensityMatrix:
    """Reduced density matrix of a normalized state on the parties ``keep``.

    ``keep`` must be a nonempty strict subset; its order sets the
    ordering of the returned matrix's tensor factors.
    """
    keep = _check_subset(keep, state.n_parties)
    state.require_normalized(tol)
    m = coefficient_matrix(state, keep, as_sparse=True)
    rho = (m @ m.conj().T).toarray()
    return DensityMatrix(state.shape.sub(keep), rho, keep)


def exact_marginal_diagonal(state: PureState, keep: Sequence[int]) -> list[Fraction]:
    """Diagonal of the reduced density matrix on ``keep``, in exact arithmetic.

    Only the diagonal is available exactly; off-diagonal entries would need
    cyclotomic arithmetic.
    """
    keep = _check_subset(keep, state.n_parties)
    if not state.is_exact:
        raise ValueError("state carries amplitudes without exact annotations")
    sub = state.shape.sub(keep)
    diag = [Fraction(0)] * sub.total
    for idx, a in state.items():
        k = np.ravel_multi_index(tuple(idx[p] for p in keep), sub.dims)
        diag[int(k)] += a.exact.radicand
    return diag


def schmidt_coefficients(state: PureState, row_parties: Sequence[int]) -> np.ndarray:
    """Singular values of the coefficient matrix across ``row_parties | rest``."""
    return np.linalg.svd(coefficient_matrix(state, row_parties), compute_uv=False)


def _check_pairing(pairing, na: int, nb: int) -> list[tuple[int, int]]:
    pairs = [(int(p), int(q)) for p, q in pairing]
    a_side = [p for p, _ in pairs]
    b_side = [q for _, q in pairs]
    if any(not 0 <= p < na for p in a_side) or any(not 0 <= q < nb for q in b_side):
        raise InvalidPairingError(f"pairing {pairs} out of range for {na} and {nb} parties")
    if len(set(a_side)) != len(a_side) or len(set(b_side)) != len(b_side):
        raise InvalidPairingError(f"pairing {pairs} reuses a party")
    return pairs


def tensor_product(a: PureState, b: PureState, pairing: Iterable[tuple[int, int]] = ()) -> PureState:
    """``a (x) b`` with selected parties fused pairwise.

    Output parties follow ``a``'s order, each paired party of ``a`` fused
    with its partner from ``b`` (dimension ``d_a * d_b``, index
    ``i_a * d_b + i_b``); ``b``'s unpaired parties are appended in order.
    """
    pairs = _check_pairing(pairing, a.n_parties, b.n_parties)
    partner = dict(pairs)
    paired_b = set(partner.values())
    rest_b = [q for q in range(b.n_parties) if q not in paired_b]

    dims = [a.dims[p] * b.dims[partner[p]] if p in partner else a.dims[p] for p in range(a.n_parties)]
    dims += [b.dims[q] for q in rest_b]

    amps = {}
    for ia, xa in a.items():
        for ib, xb in b.items():
            idx = [
                ia[p] * b.dims[partner[p]] + ib[partner[p]] if p in partner else ia[p]
                for p in range(a.n_parties)
            ]
            idx += [ib[q] for q in rest_b]
            amps[tuple(idx)] = xa * xb
    return PureState(dims, amps)


def permute_parties(state: PureState, order: Sequence[int]) -> PureState:
    """Reorder parties: output party ``i`` is input party ``order[i]``."""
    order = tuple(int(p) for p in order)
    if sorted(order) != list(range(state.n_parties)):
        raise InvalidSubsetError(f"{order} is not a permutation of the parties")
    dims = [state.dims[p] for p in order]
    return PureState(dims, {tuple(idx[p] for p in order): a for idx, a in state.items()})


def fidelity(a: PureState, b: PureState) -> float:
    """``|<a|b>|^2`` for states on the same system."""
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes {a.dims} and {b.dims} differ")
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    overlap = sum(
        (x.value.conjugate() * large._amps[idx].value for idx, x in small.items() if idx in large._amps),
        0j,
    )
    if small is b:
        overlap = overlap.conjugate()
    return min(1.0, abs(overlap) ** 2)


# standard states


def ghz(d: int, n: int) -> PureState:
    """``(1/sqrt(d)) sum_j |j...j>`` on ``n`` parties of dimension ``d``."""
    return PureState([d] * n, {(j,) * n: Amplitude.from_exact(Fraction(1, d)) for j in range(d)})


def bell(d: int) -> PureState:
    """Maximally entangled two-party state ``(1/sqrt(d)) sum_j |jj>``."""
    return ghz(d, 2)


def product_basis_state(dims, index: Sequence[int]) -> PureState:
    return PureState.basis(dims, index)


def all_indices(dims: Sequence[int]) -> Iterator[tuple[int, ...]]:
    return product(*(range(d) for d in dims))
