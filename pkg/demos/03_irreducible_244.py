"""
Reducible and irreducible AME states in 2 x 4 x 4
=================================================

No number-theoretic rule settles ``2 x 4 x 4``: the classifier returns
``unknown`` together with the only admissible split, a 2-qubit factor
times a 3-qubit factor.  Two concrete states show that both answers
occur.
"""

from fractions import Fraction

from ame_forge import (
    Amplitude,
    PureState,
    bell,
    certify_244_irreducible,
    classify_state,
    classify_system,
    ghz,
    pencil_min_schmidt_rank,
    tensor_product,
)

print(classify_system((2, 4, 4)).to_dict())

###############################################################################
# A reducible one: GHZ on three qubits times a Bell pair, with the Bell
# halves fused into parties B and C.

reducible = tensor_product(ghz(2, 3), bell(2), [(1, 0), (2, 1)])
verdict = classify_state(reducible)
print(verdict.status, [w.dims for w in verdict.witness])

###############################################################################
# An irreducible one: ``|0, x> + |1, y>`` with ``x`` the identity and
# ``y`` the cyclic shift on ``C^4``.  A product form would put a vector
# of Schmidt rank two into ``span{x, y}``; the pencil ``X + t Y`` drops
# rank only at the fourth roots of unity, and only to three.

quarter = Fraction(1, 4)
x = PureState((4, 4), {(j, j): Amplitude.from_exact(quarter) for j in range(4)})
y = PureState((4, 4), {(j, (j + 1) % 4): Amplitude.from_exact(quarter) for j in range(4)})
print("min Schmidt rank in span{x, y}:", pencil_min_schmidt_rank(x, y))

psi = PureState(
    (2, 4, 4),
    {(flag,) + idx: Amplitude.from_exact(a.exact.radicand / 2) for flag, block in ((0, x), (1, y)) for idx, a in block.items()},
)
print("certified irreducible:", certify_244_irreducible(psi))
print("certified irreducible (GHZ x Bell):", certify_244_irreducible(reducible))
