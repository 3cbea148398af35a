"""Irreducibility of AME states.

An AME state is reducible when, up to local unitaries, it is the tensor
product of two AME states on the same number of parties with smaller
local dimensions.  Deciding this in general is out of reach, so the
verdicts here are three-valued: a number-theoretic rule or a pencil-rank
argument can certify irreducibility, an explicit product decomposition
witnesses reducibility, and everything else is ``unknown``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np
import sympy as sp
from scipy.linalg import eigvals

from .errors import (
    NotApplicableError,
    PreconditionError,
    ShapeMismatchError,
    StructureError,
)
from .tensor import PureState, as_shape, coefficient_matrix
from .verifier import dimension_precheck, is_ame, verify_uniform

IRREDUCIBLE = "irreducible-certified"
REDUCIBLE = "reducible-witnessed"
UNKNOWN = "unknown"

NUMERIC_RANK_RTOL = 1e-9


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class ReducibilityVerdict:
    status: str
    reason: str | None = None
    factorizations: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()
    matched_rules: tuple[str, ...] = ()
    admissible: bool = True
    witness: tuple[PureState, PureState] | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        d = {
            "status": self.status,
            "reason": self.reason,
            "matched_rules": list(self.matched_rules),
            "ame_admissible": self.admissible,
            "factorizations": [[list(p), list(q)] for p, q in self.factorizations],
        }
        if self.witness is not None:
            d["witness"] = [w.to_dict() for w in self.witness]
        return d


def _rule_i(dims) -> bool:
    if len(dims) != 3:
        return False
    return any(
        is_prime(dims[i]) and math.gcd(*(dims[j] for j in range(3) if j != i)) == 1 for i in range(3)
    )


def _rule_ii(dims) -> bool:
    n = len(dims)
    for i, j in combinations(range(n), 2):
        p, q = dims[i], dims[j]
        if is_prime(p) and is_prime(q):
            others = [dims[r] for r in range(n) if r not in (i, j)]
            # tripartite: irreducible iff the third dimension is below pq, and
            # above pq no AME state exists at all
            if any(d != p * q for d in others):
                return True
    return False


def _rule_iii(dims) -> bool:
    return sum(is_prime(d) for d in dims) >= 3


def _divisor_pairs(d: int) -> list[tuple[int, int]]:
    return [(p, d // p) for p in range(1, d + 1) if d % p == 0]


def candidate_factorizations(dims) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Splittings ``d_i = p_i q_i`` a reducible AME state could have.

    Both factors must be nontrivial, pass the dimension pre-check, and
    respect the placement constraints forced by the prime dimensions.
    Each unordered pair appears once, smaller factor vector first.
    """
    dims = tuple(dims)
    n = len(dims)
    primes = [i for i, d in enumerate(dims) if is_prime(d)]
    half = n // 2
    found = set()
    for choice in product(*(_divisor_pairs(d) for d in dims)):
        p = tuple(c[0] for c in choice)
        q = tuple(c[1] for c in choice)
        if all(v == 1 for v in p) or all(v == 1 for v in q):
            continue
        if len(primes) == 0:
            if p.count(1) > 1 or q.count(1) > 1:
                continue
        elif len(primes) in (1, 2):
            rest = [i for i in range(n) if i not in primes]
            if any(p[i] == 1 or q[i] == 1 for i in rest):
                continue
            if len(primes) == 2:
                a, b = primes
                # the two prime parties must sit in different factors
                if p[a] == p[b]:
                    continue
        else:
            continue
        if half >= 1 and not (dimension_precheck(p, half) and dimension_precheck(q, half)):
            continue
        found.add(min((p, q), (q, p)))
    return sorted(found)


def classify_system(dims) -> ReducibilityVerdict:
    """Certify irreducibility of every AME state in a system, when a rule applies.

    Rules are tried in the order: at least three prime dimensions; a
    tripartite system with a prime dimension and the other two coprime;
    two prime dimensions ``p, q`` with some other dimension ``!= pq``.
    """
    dims = as_shape(dims).dims
    n = len(dims)
    if n < 3 or n % 2 == 0:
        raise NotApplicableError(
            f"classification needs an odd number (>= 3) of parties, got {n}; "
            "heterogeneous systems with an even party count hold no AME states"
        )
    admissible = bool(dimension_precheck(dims, n // 2))
    matched = tuple(
        name for name, rule in (("Thm2.iii", _rule_iii), ("Thm2.i", _rule_i), ("Thm2.ii", _rule_ii)) if rule(dims)
    )
    if matched:
        return ReducibilityVerdict(IRREDUCIBLE, matched[0], (), matched, admissible)
    return ReducibilityVerdict(UNKNOWN, None, tuple(candidate_factorizations(dims)), (), admissible)


# matrix pencils


def _exact_ratio_matrix(state: PureState) -> sp.Matrix | None:
    """Coefficient matrix divided by its first entry, if every ratio lies in Q(i)."""
    if not state.is_exact or not len(state):
        return None
    (idx0, a0), *_ = state.items()
    ref = a0.exact
    rows, cols = state.dims
    mat = sp.zeros(rows, cols)
    for (r, c), a in state.items():
        ratio = a.exact.radicand / ref.radicand
        num, den = math.isqrt(ratio.numerator), math.isqrt(ratio.denominator)
        if num * num != ratio.numerator or den * den != ratio.denominator:
            return None
        turn = (a.exact.phase - ref.phase) % 1
        if (4 * turn).denominator != 1:
            return None
        unit = (1, sp.I, -1, -sp.I)[int(4 * turn)]
        mat[r, c] = sp.Rational(num, den) * unit
    return mat


def _exact_min_rank(X: sp.Matrix, Y: sp.Matrix) -> int:
    lam = sp.Symbol("lam")
    domain = "QQ_I" if any(v.has(sp.I) for v in list(X) + list(Y)) else "QQ"
    P = X + lam * Y
    size = min(P.shape)
    # rank(X + lam Y) >= s for every lam  iff  the s x s minors share no root
    finite = size
    for s in range(1, size + 1):
        g = None
        for rows in combinations(range(P.rows), s):
            for cols in combinations(range(P.cols), s):
                minor = sp.Poly(P.extract(list(rows), list(cols)).det(method="berkowitz"), lam, domain=domain)
                if minor.is_zero:
                    continue
                g = minor if g is None else g.gcd(minor)
                if g.degree() == 0:
                    break
            if g is not None and g.degree() == 0:
                break
        if g is None or g.degree() > 0:
            finite = s - 1
            break
    return min(finite, Y.rank())


def _numeric_rank(mat: np.ndarray) -> int:
    sv = np.linalg.svd(mat, compute_uv=False)
    if not sv.size or sv[0] == 0:
        return 0
    return int(np.sum(sv > NUMERIC_RANK_RTOL * sv[0]))


def _numeric_min_rank(X: np.ndarray, Y: np.ndarray, rng: np.random.Generator) -> int:
    best = min(_numeric_rank(X), _numeric_rank(Y))
    generic = _numeric_rank(X + complex(rng.normal(), rng.normal()) * Y)
    if generic == 0:
        return 0
    # a random r x r compression is a regular pencil whose eigenvalues include
    # every point where the rank of X + lam Y drops below r
    U = rng.normal(size=(generic, X.shape[0])) + 1j * rng.normal(size=(generic, X.shape[0]))
    V = rng.normal(size=(X.shape[1], generic)) + 1j * rng.normal(size=(X.shape[1], generic))
    for lam in eigvals(U @ X @ V, -(U @ Y @ V)):
        if np.isfinite(lam):
            best = min(best, _numeric_rank(X + lam * Y))
    return best


def pencil_min_schmidt_rank(x: PureState, y: PureState, *, seed: int = 0) -> int:
    """Smallest Schmidt rank in ``span{x, y}``.

    This is the minimum rank of ``a X + b Y`` over ``(a, b) != 0`` where
    ``X, Y`` are the coefficient matrices.  Exact Q(i) arithmetic is used
    when the exact annotations allow it; otherwise singular values are
    thresholded at ``1e-9 * sigma_max``.
    """
    if x.n_parties != 2 or y.n_parties != 2:
        raise ShapeMismatchError("pencil rank needs bipartite states")
    if x.dims != y.dims:
        raise ShapeMismatchError(f"shapes {x.dims} and {y.dims} differ")
    Xn, Yn = coefficient_matrix(x, [0]), coefficient_matrix(y, [0])
    if _numeric_rank(np.column_stack([Xn.ravel(), Yn.ravel()])) < 2:
        raise PreconditionError("x and y are linearly dependent")
    Xe, Ye = _exact_ratio_matrix(x), _exact_ratio_matrix(y)
    if Xe is not None and Ye is not None:
        return _exact_min_rank(Xe, Ye)
    return _numeric_min_rank(Xn, Yn, np.random.default_rng(seed))


def two_block_components(state: PureState) -> tuple[PureState, PureState]:
    """Split ``|0,x> + |1,y>`` into the (unnormalized) blocks ``x`` and ``y``."""
    if state.dims[0] != 2 or state.n_parties != 3:
        raise StructureError(f"expected a 2 x d x d' state, got {state.dims}")
    rest = state.dims[1:]
    blocks = []
    for a in (0, 1):
        blocks.append(PureState(rest, {idx[1:]: amp for idx, amp in state.items() if idx[0] == a}))
    return blocks[0], blocks[1]


def certify_244_irreducible(state: PureState, tol: float | None = None, *, seed: int = 0) -> bool:
    """Irreducibility certificate for AME states in ``2 x 4 x 4``.

    A reducible state would be ``(|0,a> + |1,b>) (x) |c>`` with ``c`` on
    ``2 x 2``, putting a vector of Schmidt rank at most two into
    ``span{x, y}``.  So the state is certified when it is AME and that
    span has minimum Schmidt rank at least three.
    """
    if state.dims != (2, 4, 4):
        raise StructureError(f"expected a 2x4x4 state, got {state.dims}")
    if not verify_uniform(state, 1, tol).is_k_uniform:
        return False
    x, y = two_block_components(state)
    if not len(x) or not len(y):
        return False
    return pencil_min_schmidt_rank(x, y, seed=seed) >= 3


def _split_as_product(state: PureState, p, q, tol: float):
    """Try ``state = phi_p (x) phi_q`` with party ``i`` fused as ``(p_i, q_i)``."""
    n = state.n_parties
    tensor = state.to_tensor().reshape([v for i in range(n) for v in (p[i], q[i])])
    order = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    mat = tensor.transpose(order).reshape(math.prod(p), math.prod(q))
    u, s, vh = np.linalg.svd(mat)
    if s.size > 1 and s[1] > tol * max(s[0], 1.0):
        return None
    root = np.sqrt(s[0])
    return (
        PureState.from_vector(p, u[:, 0] * root, atol=tol),
        PureState.from_vector(q, vh[0] * root, atol=tol),
    )


def classify_state(state: PureState, tol: float | None = None, *, seed: int = 0) -> ReducibilityVerdict:
    """State-level verdict: system rules, then the 2x4x4 pencil test, then product witnesses.

    Product witnesses are searched only in the computational basis, i.e.
    without a local-unitary search.
    """
    if not is_ame(state, tol):
        raise PreconditionError("state is not AME")
    verdict = classify_system(state.dims)
    if verdict.status == IRREDUCIBLE:
        return verdict
    if state.dims == (2, 4, 4) and certify_244_irreducible(state, tol, seed=seed):
        return ReducibilityVerdict(IRREDUCIBLE, "pencil-witness", verdict.factorizations, (), True)
    num_tol = 1e-10 if tol is None else max(tol, 1e-10)
    for pair in verdict.factorizations:
        # either factor may occupy the high digit of the fused index
        for p, q in (pair, pair[::-1]):
            split = _split_as_product(state, p, q, num_tol)
            if split is None:
                continue
            a, b = (f.normalized() for f in split)
            if is_ame(a, num_tol) and is_ame(b, num_tol):
                return ReducibilityVerdict(
                    REDUCIBLE, "factorization-witness", verdict.factorizations, (), True, (a, b)
                )
    return verdict


__all__ = [
    "IRREDUCIBLE",
    "REDUCIBLE",
    "UNKNOWN",
    "ReducibilityVerdict",
    "candidate_factorizations",
    "certify_244_irreducible",
    "classify_state",
    "classify_system",
    "is_prime",
    "pencil_min_schmidt_rank",
    "two_block_components",
]
