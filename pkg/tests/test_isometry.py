from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ame_forge.constructors import compose_fig1, construct_2mmn, construct_lmkm, construct_mmn
from ame_forge.errors import DimensionError, InvalidSubsetError, NormalizationError, PartyCountError, ShapeMismatchError
from ame_forge.isometry import CoefficientMatrixView, check_k_isometry, check_k_unitary, state_from_isometry
from ame_forge.msa import msa_to_state, worked_example_array
from ame_forge.tensor import Amplitude, PureState, bell, fidelity, ghz, permute_parties, tensor_product
from ame_forge.verifier import verify_uniform

import oracles


def worked_345_unnormalized():
    return PureState((3, 4, 5), {idx: Amplitude.from_exact(r) for idx, r in oracles.WORKED_345_TERMS.items()})


def test_worked_345_constants():
    v = check_k_isometry(worked_345_unnormalized(), 1)
    assert v.passed and v.trace_consistent
    by_dim = {s.col_dim: s.constant for s in v.splits}
    assert by_dim[5] == pytest.approx(1, abs=1e-12)
    assert by_dim[3] == pytest.approx(5 / 3, abs=1e-12)
    assert by_dim[4] == pytest.approx(5 / 4, abs=1e-12)
    assert {s.col_dim: s.exact_constant for s in v.splits} == {5: 1, 3: Fraction(5, 3), 4: Fraction(5, 4)}


def test_constants_follow_norm_over_column_dimension():
    state = worked_345_unnormalized()
    norm2 = state.norm_squared()
    for s in check_k_isometry(state, 1).splits:
        assert abs(s.constant - norm2 / s.col_dim) < 1e-12
        assert abs(s.trace - norm2) < 1e-12


def test_gram_matches_direct_computation():
    state = worked_345_unnormalized()
    t = oracles.state_tensor(state)
    A = t.reshape(12, 5)
    assert np.allclose(A.conj().T @ A, np.eye(5), atol=1e-12)


def test_unnormalized_ghz():
    state = PureState((2, 2, 2), {(j, j, j): 1.0 for j in range(2)})
    v = check_k_isometry(state, 1)
    assert v.passed and v.constants == [1.0, 1.0, 1.0]


def test_product_state_fails():
    v = check_k_isometry(PureState.basis((2, 2, 2), (0, 0, 0)), 1)
    assert not v.passed
    assert not any(s.passed for s in v.splits)


def test_party_count():
    with pytest.raises(PartyCountError):
        check_k_isometry(bell(2), 1)


def test_standard_isometry_need_not_be_one_isometry():
    # rows (a, b), column c: A = [|00> -> 0, |01> -> 1] is an isometry, but the
    # split with column a is rank one
    view = CoefficientMatrixView.from_matrix(np.array([[1, 0], [0, 1], [0, 0], [0, 0]]), (2, 2), (2,))
    assert np.allclose(view.gram(), np.eye(2))
    state = state_from_isometry(view)
    assert not check_k_isometry(state, 1).passed


STATES = [
    construct_mmn(2, 3),
    construct_mmn(3, 7),
    construct_lmkm(2, 5, 2),
    construct_2mmn(4, 2),
    compose_fig1(2, 3),
    msa_to_state(worked_example_array()),
    ghz(3, 3),
    PureState.basis((2, 3, 4), (0, 1, 2)),
    tensor_product(bell(2), PureState.basis((3,), (0,))),
]


@pytest.mark.parametrize("state", STATES, ids=lambda s: "x".join(map(str, s.dims)))
def test_isometry_iff_one_uniform(state):
    assert check_k_isometry(state, 1).passed == verify_uniform(state, 1).is_k_uniform


@pytest.mark.parametrize("state", STATES[:7], ids=lambda s: "x".join(map(str, s.dims)))
def test_roundtrip_through_view(state):
    view = CoefficientMatrixView.from_state(state, [2])
    back = state_from_isometry(view)
    assert fidelity(back, state) == pytest.approx(1.0)
    assert verify_uniform(back, 1).is_k_uniform


def test_state_from_worked_table_normalizes():
    view = CoefficientMatrixView.from_state(worked_345_unnormalized(), [2])
    state = state_from_isometry(view)
    assert fidelity(state, msa_to_state(worked_example_array())) == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31))
def test_random_view_gives_a_state(seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
    state = state_from_isometry(CoefficientMatrixView.from_matrix(M, (2, 3), (3,)))
    assert state.is_normalized()
    assert check_k_isometry(state, 1).passed == verify_uniform(state, 1, tol=1e-9).is_k_uniform


def test_zero_matrix():
    with pytest.raises(NormalizationError):
        state_from_isometry(CoefficientMatrixView.from_matrix(np.zeros((4, 2)), (2, 2), (2,)))


def test_view_validation():
    with pytest.raises(DimensionError):
        CoefficientMatrixView.from_matrix(np.zeros((3, 2)), (2, 2), (2,))
    with pytest.raises(InvalidSubsetError):
        CoefficientMatrixView((0,), (0,), (2, 2), np.zeros((2, 2)))


def test_k_unitary_identity():
    state = PureState((3, 3), {(j, j): 1.0 for j in range(3)})
    v = check_k_unitary(state, 1)
    assert v.passed and v.strictly_unitary


def test_k_unitary_normalized_bell_is_proportional():
    v = check_k_unitary(bell(3), 1)
    assert v.passed and not v.strictly_unitary
    assert v.scale == pytest.approx(1 / 3)


def test_k_unitary_four_party_cases():
    # two Bell pairs, placed on (0,1)(2,3) and on (0,2)(1,3); neither is 2-uniform
    pairs = tensor_product(bell(2), bell(2))
    crossed = permute_parties(pairs, [0, 2, 1, 3])
    for state in (pairs, crossed, ghz(2, 4)):
        assert check_k_unitary(state, 2).passed == verify_uniform(state, 2).is_k_uniform
    assert not check_k_unitary(ghz(2, 4), 2).passed


def test_k_unitary_ame_four_qutrits():
    # |a, b, a+b, a+2b> mod 3 is AME(4, 3)
    amps = {(a, b, (a + b) % 3, (a + 2 * b) % 3): 1 / 3 for a in range(3) for b in range(3)}
    state = PureState((3, 3, 3, 3), amps)
    assert verify_uniform(state, 2).is_ame
    assert check_k_unitary(state, 2).passed


def test_k_unitary_errors():
    with pytest.raises(PartyCountError):
        check_k_unitary(ghz(2, 3), 1)
    with pytest.raises(ShapeMismatchError):
        check_k_unitary(PureState.basis((2, 3), (0, 0)), 1)
