"""
Magic solution arrays and a 3 x 4 x 5 AME state
===============================================

A nonnegative ``l x m`` array whose rows sum to 1, whose columns sum to
``l/m`` and whose wrapped diagonals (mod ``n``) sum to ``l/n`` is all it
takes to write down a tripartite AME state in ``l x m x n``.
"""

import numpy as np

from ame_forge import (
    Amplitude,
    MsaProblem,
    PureState,
    check_k_isometry,
    msa_to_state,
    partial_trace,
    solve_msa,
    verify_msa,
)

###############################################################################
# The exact simplex finds a vertex of the MSA polytope.  Entries are
# Fractions, so the constraint check below is exact equality.

problem = MsaProblem(3, 4, 5)
arr = solve_msa(problem)
for row in arr.y:
    print("  ".join(f"{str(v):>5}" for v in row))
print("valid:", bool(verify_msa(arr)))

###############################################################################
# Each entry ``y[k][j]`` becomes the amplitude ``sqrt(y/l)`` of
# ``|k, j, (j + k) mod n>``.  All three single-party marginals come out
# maximally mixed.

state = msa_to_state(arr)
for party, d in enumerate(state.dims):
    rho = partial_trace(state, [party]).matrix
    print(f"party {party}: max |rho - I/{d}| = {np.max(np.abs(rho - np.eye(d) / d)):.1e}")

###############################################################################
# Scaled so that the coefficient matrix with the 5-dimensional party as
# columns is an isometry, every reshaping ``A`` has ``A^dagger A``
# proportional to the identity; the constants are ``5 / d_col``.

scaled = PureState(state.dims, {i: Amplitude.from_exact(a.exact.radicand * 5) for i, a in state.items()})
for split in check_k_isometry(scaled, 1).splits:
    print(f"columns {split.col_parties}: A^dagger A = {split.exact_constant} I_{split.col_dim}")

###############################################################################
# Not every triple in the regime needs the same array shape; the solver
# handles them all.

for dims in [(3, 5, 7), (4, 5, 8), (4, 6, 9)]:
    result = solve_msa(MsaProblem(*dims))
    print(dims, "feasible" if verify_msa(result) else "infeasible")
