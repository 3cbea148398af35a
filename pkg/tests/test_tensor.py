import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ame_forge.errors import InvalidPairingError, InvalidSubsetError, NormalizationError
from ame_forge.tensor import (
    TOL_ENV_VAR,
    Amplitude,
    ExactAmplitude,
    PureState,
    bell,
    coefficient_matrix,
    default_tol,
    exact_marginal_diagonal,
    fidelity,
    ghz,
    partial_trace,
    permute_parties,
    schmidt_coefficients,
    tensor_product,
)

import oracles


dims_strategy = st.lists(st.integers(1, 3), min_size=2, max_size=4)


@st.composite
def random_states(draw):
    dims = draw(dims_strategy)
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    total = math.prod(dims)
    vec = rng.normal(size=total) + 1j * rng.normal(size=total)
    return PureState.from_vector(dims, vec / np.linalg.norm(vec))


def test_exact_amplitude_values():
    a = ExactAmplitude(Fraction(1, 4), Fraction(1, 4))
    assert complex(a) == 0.5j
    assert ExactAmplitude(Fraction(1, 2), Fraction(5, 4)).phase == Fraction(1, 4)
    prod = a * ExactAmplitude(Fraction(1, 9), Fraction(3, 4))
    assert prod.radicand == Fraction(1, 36) and prod.phase == 0


def test_amplitude_rejects_inconsistent_annotation():
    with pytest.raises(ValueError):
        Amplitude(0.3, ExactAmplitude(Fraction(1, 4)))


def test_state_drops_zeros_and_sorts():
    s = PureState((2, 2), {(1, 1): 0.6, (0, 0): 0.8, (0, 1): 0})
    assert [idx for idx, _ in s.items()] == [(0, 0), (1, 1)]
    assert len(s) == 2


def test_bad_index_rejected():
    with pytest.raises(ValueError):
        PureState((2, 2), {(2, 0): 1.0})


def test_partial_trace_requires_normalization():
    s = PureState((2, 2), {(0, 0): 1.0, (1, 1): 1.0})
    with pytest.raises(NormalizationError):
        partial_trace(s, [0])
    rho = partial_trace(s.normalized(), [0])
    assert np.allclose(rho.matrix, np.eye(2) / 2, atol=1e-15)


def test_exact_normalization_is_exact():
    s = PureState((2, 2), {(0, 0): Amplitude.from_exact(1), (1, 1): Amplitude.from_exact(1)})
    assert s.exact_norm_squared() == 2
    assert s.normalized().exact_norm_squared() == 1


def test_partial_trace_subset_validation():
    s = ghz(2, 3)
    with pytest.raises(InvalidSubsetError):
        partial_trace(s, [0, 1, 2])
    with pytest.raises(InvalidSubsetError):
        partial_trace(s, [3])
    with pytest.raises(InvalidSubsetError):
        partial_trace(s, [])


@settings(max_examples=40, deadline=None)
@given(random_states(), st.data())
def test_partial_trace_matches_einsum(state, data):
    n = state.n_parties
    keep = data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n - 1, unique=True))
    rho = partial_trace(state, keep)
    ref = oracles.marginal(oracles.state_tensor(state), keep)
    assert np.allclose(rho.matrix, ref, atol=1e-12)
    assert abs(rho.trace() - 1) < 1e-12
    assert rho.check()


@settings(max_examples=30, deadline=None)
@given(random_states())
def test_json_roundtrip(state):
    again = PureState.from_json(state.to_json())
    assert again == state
    assert again.to_json() == state.to_json()


def test_json_roundtrip_keeps_exact_annotations():
    s = bell(3)
    back = PureState.from_dict(json.loads(s.to_json()))
    assert back.is_exact
    assert back.exact_norm_squared() == 1


def test_coefficient_matrix_orders_rows_as_given():
    s = PureState((2, 3), {(1, 2): 1.0})
    m = coefficient_matrix(s, [1])
    assert m.shape == (3, 2) and m[2, 1] == 1.0
    assert coefficient_matrix(s, [0], as_sparse=True).nnz == 1


def test_tensor_product_fuses_pairs():
    out = tensor_product(bell(2), bell(3), [(1, 0)])
    assert out.dims == (2, 6, 3)
    # |1>|1> (x) |2>|2>: fused index 1*3 + 2
    assert out.amplitude((1, 5, 2)) == pytest.approx(1 / math.sqrt(6))
    assert out.is_exact and out.exact_norm_squared() == 1


def test_tensor_product_pairing_validation():
    with pytest.raises(InvalidPairingError):
        tensor_product(bell(2), bell(2), [(0, 0), (0, 1)])
    with pytest.raises(InvalidPairingError):
        tensor_product(bell(2), bell(2), [(2, 0)])


def test_permute_and_fidelity():
    s = PureState((2, 3), {(0, 1): 1.0})
    p = permute_parties(s, [1, 0])
    assert p.dims == (3, 2) and p.amplitude((1, 0)) == 1.0
    assert fidelity(ghz(2, 2), bell(2)) == pytest.approx(1.0)
    assert fidelity(PureState.basis((2, 2), (0, 1)), bell(2)) == 0.0


def test_exact_marginal_diagonal():
    diag = exact_marginal_diagonal(ghz(3, 3), [0])
    assert diag == [Fraction(1, 3)] * 3


def test_schmidt_coefficients_of_bell():
    assert np.allclose(schmidt_coefficients(bell(4), [0]), [0.5] * 4)


def test_tolerance_env_override(monkeypatch):
    monkeypatch.setenv(TOL_ENV_VAR, "1e-6")
    assert default_tol() == 1e-6
    monkeypatch.delenv(TOL_ENV_VAR)
    assert default_tol() == 1e-12
