"""
Which 2 x m x (m+n) systems hold AME states?
============================================

With one qubit party the answer is clean: ``n = 0`` or ``n`` divides
``m``.  Below, the closed-form constructor is checked against an exact
LP over the state's coefficient system, and each gap comes with a
Farkas vector.
"""

from ame_forge import MagicSolutionArray, NonexistenceError, construct_2mmn, solve_msa, two_m_mn_problem, verify_uniform

###############################################################################
# Rows are ``m``, columns are ``n``; ``#`` marks an AME state that was
# built and verified, ``.`` a system with none.

M = 10
print("m\\n " + " ".join(f"{n:>2}" for n in range(1, M + 1)))
for m in range(1, M + 1):
    cells = []
    for n in range(1, m + 1):
        try:
            ok = verify_uniform(construct_2mmn(m, n), 1).is_k_uniform
        except NonexistenceError:
            ok = False
        cells.append(" #" if ok else " .")
    print(f"{m:>3} " + " ".join(cells))

###############################################################################
# The state ``|0> sum x_j |j, j> + |1> sum y_j |j, j+n>`` is 1-uniform
# exactly when the squared coefficients solve a small linear system.  When
# ``n`` does not divide ``m`` the solver returns a certificate ``z``
# with ``A^T z >= 0`` and ``b . z < 0``.

result = solve_msa(two_m_mn_problem(5, 2))
print(type(result).__name__, "certificate checks:", result.check())
print("z =", [str(v) for v in result.farkas])

###############################################################################
# When ``n | m`` the solver's vertex is a valid coefficient set.

result = solve_msa(two_m_mn_problem(6, 2))
assert isinstance(result, MagicSolutionArray)
for row in result.y:
    print([str(v) for v in row])
