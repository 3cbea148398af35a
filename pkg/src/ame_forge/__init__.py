"""Constructing and certifying absolutely maximally entangled (AME) states
in heterogeneous systems ``d_1 x ... x d_n``.
"""

from .composer import merge_compose_even, merge_compose_odd, split_party
from .constructors import (
    GeneralizedBellBasis,
    compose_fig1,
    construct,
    construct_2mmn,
    construct_lmkm,
    construct_mmn,
    direct_sum_ab,
)
from .errors import (
    AmeForgeError,
    DimensionError,
    InvalidPairingError,
    NonexistenceError,
    PartyCountError,
    PreconditionError,
)
from .irreducibility import (
    IRREDUCIBLE,
    REDUCIBLE,
    UNKNOWN,
    ReducibilityVerdict,
    candidate_factorizations,
    certify_244_irreducible,
    classify_state,
    classify_system,
    pencil_min_schmidt_rank,
)
from .isometry import CoefficientMatrixView, check_k_isometry, check_k_unitary, state_from_isometry
from .msa import (
    MagicSolutionArray,
    MsaInfeasible,
    MsaProblem,
    MsaRegimeWarning,
    msa_to_state,
    worked_example_array,
    solve_msa,
    two_m_mn_problem,
    verify_msa,
)
from .tensor import (
    Amplitude,
    DensityMatrix,
    ExactAmplitude,
    PureState,
    SystemShape,
    bell,
    coefficient_matrix,
    ghz,
    partial_trace,
    permute_parties,
    schmidt_coefficients,
    tensor_product,
)
from .verifier import UniformityVerdict, dimension_precheck, is_ame, steer, verify_uniform

__version__ = "0.1.0"
