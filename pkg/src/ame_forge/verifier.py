"""k-uniformity and AME checks, the dimension pre-check, and steering."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator

from .errors import InvalidSubsetError, NullEventError, ParameterError
from .tensor import PureState, SystemShape, as_shape, default_tol, partial_trace


@dataclass(frozen=True)
class MarginalReport:
    subset: tuple[int, ...]
    deviation: float
    trace_distance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "subset": list(self.subset),
            "deviation": self.deviation,
            "trace_distance": self.trace_distance,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class UniformityVerdict:
    k: int
    dims: tuple[int, ...]
    tolerance: float
    reports: tuple[MarginalReport, ...]
    is_k_uniform: bool
    is_ame: bool

    @property
    def max_deviation(self) -> float:
        return max((r.deviation for r in self.reports), default=0.0)

    def failed(self) -> list[MarginalReport]:
        return [r for r in self.reports if not r.passed]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "dims": list(self.dims),
            "tolerance": self.tolerance,
            "is_k_uniform": self.is_k_uniform,
            "is_ame": self.is_ame,
            "max_deviation": self.max_deviation,
            "reports": [r.to_dict() for r in self.reports],
        }


def iter_marginal_reports(state: PureState, k: int, tol: float) -> Iterator[MarginalReport]:
    """One report per ``k``-subset, in lexicographic order."""
    for subset in combinations(range(state.n_parties), k):
        rho = partial_trace(state, subset, tol)
        dev = rho.deviation_from_maximally_mixed()
        yield MarginalReport(subset, dev, rho.trace_distance_from_maximally_mixed(), dev <= tol)


def verify_uniform(state: PureState, k: int, tol: float | None = None) -> UniformityVerdict:
    """Check that every ``k``-party marginal is maximally mixed.

    ``is_ame`` is set when ``k = floor(n/2)``, the state is ``k``-uniform,
    and the system is not a heterogeneous one with an even party count.
    """
    tol = default_tol() if tol is None else tol
    n = state.n_parties
    if not 1 <= k <= n - 1:
        raise ParameterError(f"k={k} out of range 1..{n - 1} for {n} parties")
    reports = tuple(iter_marginal_reports(state, k, tol))
    ok = all(r.passed for r in reports)
    even_hetero = n % 2 == 0 and not state.shape.is_homogeneous
    is_ame = ok and k == n // 2 and not even_hetero
    return UniformityVerdict(k, state.dims, tol, reports, ok, is_ame)


def is_ame(state: PureState, tol: float | None = None) -> bool:
    return verify_uniform(state, state.n_parties // 2, tol).is_ame


@dataclass(frozen=True)
class PrecheckResult:
    admissible: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.admissible


def dimension_precheck(shape, k: int) -> PrecheckResult:
    """Necessary condition for ``k``-uniform states.

    Inadmissible when some ``k`` parties have a larger joint dimension
    than their complement; the first such subset in lexicographic order
    is returned as witness.
    """
    shape = as_shape(shape)
    n = len(shape)
    if not 1 <= k < n:
        raise ParameterError(f"k={k} out of range 1..{n - 1}")
    total = shape.total
    for subset in combinations(range(n), k):
        inside = math.prod(shape[p] for p in subset)
        if inside * inside > total:
            return PrecheckResult(False, subset)
    return PrecheckResult(True)


def steer(
    state: PureState, party: int, outcome: int, atol: float = 1e-14
) -> tuple[PureState, float]:
    """Measure ``party`` in the computational basis and keep ``outcome``.

    Returns the renormalized state of the remaining parties (in their
    original order) and the outcome probability.
    """
    n = state.n_parties
    if not 0 <= party < n:
        raise InvalidSubsetError(f"party {party} out of range for {n} parties")
    if n < 2:
        raise InvalidSubsetError("steering needs at least two parties")
    if not 0 <= outcome < state.dims[party]:
        raise ParameterError(f"outcome {outcome} out of range for dimension {state.dims[party]}")
    kept = [(idx[:party] + idx[party + 1:], a) for idx, a in state.items() if idx[party] == outcome]
    prob = sum(abs(a.value) ** 2 for _, a in kept) / state.norm_squared()
    if prob <= atol:
        raise NullEventError(f"outcome {outcome} on party {party} has probability {prob!r}")
    dims = state.dims[:party] + state.dims[party + 1:]
    if all(a.exact is not None for _, a in kept) and state.is_exact:
        p_exact = sum((a.exact.radicand for _, a in kept), Fraction(0))
        amps = {idx: a.exact.scaled(1 / p_exact) for idx, a in kept}
        prob = float(p_exact / state.exact_norm_squared())
    else:
        scale = 1 / math.sqrt(sum(abs(a.value) ** 2 for _, a in kept))
        amps = {idx: a.value * scale for idx, a in kept}
    return PureState(SystemShape(dims), amps), prob
