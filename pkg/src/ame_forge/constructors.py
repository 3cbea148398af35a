"""Closed-form tripartite AME families.

All amplitudes are built with exact annotations: the radicands are
rational and the phases are roots of unity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NonexistenceError, ParameterError, PreconditionError, ShapeMismatchError
from .tensor import Amplitude, PureState, bell, tensor_product


@dataclass(frozen=True)
class GeneralizedBellBasis:
    """States ``(D_t (x) P_s)|Omega_l>`` on ``l x m`` with ``m >= l``.

    ``D_t = diag(1, w^t, ..., w^{(l-1)t})`` with ``w = exp(2 pi i / l)``
    and ``P_s|j> = |(j + s) mod m>`` embeds ``C^l`` into ``C^m``.  The
    ``l * m`` states with ``t < l``, ``s < m`` are orthonormal.
    """

    l: int
    m: int

    def __post_init__(self):
        if self.l < 1 or self.m < self.l:
            raise ParameterError(f"need 1 <= l <= m, got l={self.l}, m={self.m}")

    def __len__(self) -> int:
        return self.l * self.m

    def terms(self, t: int, s: int) -> dict[tuple[int, int], Amplitude]:
        """Nonzero amplitudes of ``|Psi_{t,s}>`` keyed by ``(x, y)``."""
        return {
            (x, (x + s) % self.m): Amplitude.from_exact(Fraction(1, self.l), Fraction(t * x, self.l))
            for x in range(self.l)
        }

    def vector(self, t: int, s: int) -> np.ndarray:
        vec = np.zeros(self.l * self.m, dtype=complex)
        for (x, y), a in self.terms(t, s).items():
            vec[x * self.m + y] = a.value
        return vec

    def gram(self) -> np.ndarray:
        vecs = np.array([self.vector(t, s) for t in range(self.l) for s in range(self.m)])
        return vecs.conj() @ vecs.T


def _bell_label_terms(basis: GeneralizedBellBasis, pairs, norm: Fraction) -> dict:
    # amplitude of |x, y, j> is sqrt(norm) * <x,y|Psi_{t,s}> for the j-th (t, s)
    amps = {}
    for j, (t, s) in enumerate(pairs):
        for (x, y), a in basis.terms(t, s).items():
            amps[(x, y, j)] = Amplitude.from_exact(a.exact.radicand * norm, a.exact.phase)
    return amps


def construct_mmn(m: int, n: int) -> PureState:
    """``(1/sqrt(n)) sum_{j<n} |Psi_j, j>`` in ``m x m x n``, ``j = m*t + s``."""
    if m < 1 or n < 1:
        raise ParameterError(f"need m, n >= 1, got m={m}, n={n}")
    if n > m * m:
        raise NonexistenceError(
            f"no AME state in {m}x{m}x{n}: the third party exceeds the other two ({n} > {m * m})"
        )
    basis = GeneralizedBellBasis(m, m)
    pairs = [divmod(j, m) for j in range(n)]
    return PureState((m, m, n), _bell_label_terms(basis, pairs, Fraction(1, n)))


def construct_lmkm(l: int, m: int, k: int) -> PureState:
    """``(1/sqrt(km)) sum_{t<k, s<m} |Psi_{t,s}, m*t + s>`` in ``l x m x km``."""
    if not 1 <= l < m:
        raise ParameterError(f"need 1 <= l < m, got l={l}, m={m}")
    if not 1 <= k <= l:
        raise ParameterError(f"need 1 <= k <= l, got k={k}, l={l}")
    basis = GeneralizedBellBasis(l, m)
    pairs = [(t, s) for t in range(k) for s in range(m)]
    return PureState((l, m, k * m), _bell_label_terms(basis, pairs, Fraction(1, k * m)))


def two_m_mn_coefficients(m: int, n: int) -> tuple[list[Fraction], list[Fraction]]:
    """Squared coefficients ``(x_j^2, y_j^2)`` for ``m = k n``.

    Block ``b = j // n`` has ``x^2 = (2k - 2b) / (k(k+1)n)`` and
    ``y^2 = (2b + 2) / (k(k+1)n)``.
    """
    if n < 1 or m < 1 or m % n:
        raise NonexistenceError(
            f"no AME: m not multiple of n (2x{m}x{m + n} has AME states iff n=0 or n divides m)"
        )
    k = m // n
    denom = k * (k + 1) * n
    xs = [Fraction(2 * k - 2 * (j // n), denom) for j in range(m)]
    ys = [Fraction(2 * (j // n) + 2, denom) for j in range(m)]
    return xs, ys


def construct_2mmn(m: int, n: int) -> PureState:
    """AME state in ``2 x m x (m+n)``; exists iff ``n = 0`` or ``n | m``.

    For ``n >= 1`` this is
    ``(1/sqrt 2)(|0> sum_j x_j |j, j> + |1> sum_j y_j |j, j+n>)``.
    For ``n = 0`` the two-dimensional party labels two orthogonal
    maximally entangled states of ``m x m``.
    """
    if m < 1 or n < 0:
        raise ParameterError(f"need m >= 1 and n >= 0, got m={m}, n={n}")
    if n == 0:
        if m < 2:
            raise NonexistenceError("no AME state in 2x1x1: party A exceeds the rest (2 > 1)")
        basis = GeneralizedBellBasis(m, m)
        amps = {}
        for a, (t, s) in enumerate([(0, 0), (0, 1)]):
            for (x, y), amp in basis.terms(t, s).items():
                amps[(a, x, y)] = Amplitude.from_exact(amp.exact.radicand / 2, amp.exact.phase)
        return PureState((2, m, m), amps)
    xs, ys = two_m_mn_coefficients(m, n)
    amps = {}
    for j in range(m):
        amps[(0, j, j)] = Amplitude.from_exact(xs[j] / 2)
        amps[(1, j, j + n)] = Amplitude.from_exact(ys[j] / 2)
    return PureState((2, m, m + n), amps)


def direct_sum_ab(psi: PureState, phi: PureState, tol: float | None = None) -> PureState:
    """``(1/sqrt 2)(|00>_AB |psi> + |11>_AB |phi>)`` in ``2d_A x 2d_B x d_C``."""
    from .verifier import verify_uniform

    if psi.n_parties != 3 or phi.n_parties != 3:
        raise ShapeMismatchError("direct sum needs two tripartite states")
    if psi.dims != phi.dims:
        raise ShapeMismatchError(f"shapes {psi.dims} and {phi.dims} differ")
    for name, st in (("psi", psi), ("phi", phi)):
        if not verify_uniform(st, 1, tol).is_k_uniform:
            raise PreconditionError(f"{name} is not an AME state")
    da, db, dc = psi.dims
    half = Amplitude.from_exact(Fraction(1, 2))
    amps = {}
    for flag, st in ((0, psi), (1, phi)):
        for (a, b, c), amp in st.items():
            amps[(flag * da + a, flag * db + b, c)] = amp * half
    return PureState((2 * da, 2 * db, dc), amps)


def compose_fig1(k: int, l: int) -> PureState:
    """AME state in ``2 x kl x (kl + l)``: a ``2 x k x (k+1)`` state times an ``l x l`` Bell pair."""
    if k < 1 or l < 1:
        raise ParameterError(f"need k, l >= 1, got k={k}, l={l}")
    return tensor_product(construct_2mmn(k, 1), bell(l), [(1, 0), (2, 1)])


FAMILIES = ("mmn", "lmkm", "2mmn", "direct-sum", "fig1")


def construct(family: str, **params) -> PureState:
    """Dispatch by family name; used by the command line."""
    if family == "mmn":
        return construct_mmn(params["m"], params["n"])
    if family == "lmkm":
        return construct_lmkm(params["l"], params["m"], params["k"])
    if family == "2mmn":
        return construct_2mmn(params["m"], params["n"])
    if family == "direct-sum":
        return direct_sum_ab(params["psi"], params["phi"])
    if family == "fig1":
        return compose_fig1(params["k"], params["l"])
    raise ParameterError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
