"""
More parties from fewer, and steering with a third party
========================================================

Fusing the shared parties of two AME states gives states with one more
party.  From an even number of parties the result is AME again; from an
odd number it is only ``n``-uniform.
"""

import numpy as np

from ame_forge import bell, construct_mmn, ghz, merge_compose_even, merge_compose_odd, steer, verify_uniform
from ame_forge.tensor import schmidt_coefficients

###############################################################################
# Two Bell pairs of different dimension give an AME state in 2 x 3 x 6.

even = merge_compose_even(bell(2), bell(3))
print(even.dims, "AME:", verify_uniform(even, 1).is_ame)

###############################################################################
# Two 3-qubit GHZ states give a 1-uniform state in 2 x 2 x 4 x 4.  It is
# not 2-uniform: the pair marginals still remember the GHZ correlations.

odd = merge_compose_odd(ghz(2, 3), ghz(2, 3))
for k in (1, 2):
    v = verify_uniform(odd, k)
    print(f"k={k}: uniform={v.is_k_uniform}  max deviation={v.max_deviation:.4f}")

###############################################################################
# Steering.  In the 2 x 2 x 4 state built from the Bell basis, measuring
# the third party in the computational basis leaves A and B in one of the
# four Bell states, each with probability 1/4.

state = construct_mmn(2, 4)
for outcome in range(4):
    post, p = steer(state, 2, outcome)
    s = schmidt_coefficients(post, [0])
    print(f"outcome {outcome}: p = {p:.4f}, Schmidt coefficients {np.round(s, 6)}")
