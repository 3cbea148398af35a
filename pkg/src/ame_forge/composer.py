"""Building states with more parties out of AME states.

* :func:`split_party` reads one composite party ``(AB)`` of a state as two
  parties ``A, B``.
* :func:`merge_compose_even` takes AME states on ``(A, C_1..C_{2n-1})``
  and ``(B, C'_1..C'_{2n-1})`` and fuses ``C_j`` with ``C'_j``; the result
  is AME on ``(A, B, C_1C'_1, ...)``.
* :func:`merge_compose_odd` does the same for AME states with ``2n + 1``
  parties and gives an ``n``-uniform state on ``2n + 2`` parties.
"""

from __future__ import annotations

from typing import Sequence

from .errors import DimensionError, InvalidPairingError, InvalidSubsetError, PartyCountError
from .tensor import PureState, permute_parties, tensor_product


def split_party(state: PureState, party: int, d_a: int, d_b: int) -> PureState:
    """Replace ``party`` by two parties of dimensions ``d_a, d_b`` (index ``i_a * d_b + i_b``)."""
    if not 0 <= party < state.n_parties:
        raise InvalidSubsetError(f"party {party} out of range for {state.n_parties} parties")
    if d_a < 1 or d_b < 1 or d_a * d_b != state.dims[party]:
        raise DimensionError(f"{d_a} * {d_b} != {state.dims[party]}")
    dims = state.dims[:party] + (d_a, d_b) + state.dims[party + 1:]
    amps = {idx[:party] + divmod(idx[party], d_b) + idx[party + 1:]: a for idx, a in state.items()}
    return PureState(dims, amps)


def _resolve_pairing(psi, phi, pairing, a_party, b_party, n_shared):
    if pairing is None:
        rest_a = [p for p in range(psi.n_parties) if p != a_party]
        rest_b = [q for q in range(phi.n_parties) if q != b_party]
        pairing = list(zip(rest_a, rest_b))
    pairing = [(int(p), int(q)) for p, q in pairing]
    if len(pairing) != n_shared:
        raise InvalidPairingError(f"need {n_shared} shared slots, got {len(pairing)}")
    for p, q in pairing:
        if p == a_party or q == b_party:
            raise InvalidPairingError(f"pairing {pairing} references the unshared parties")
    return pairing


def _merge(psi, phi, pairing, a_party, b_party, n_shared):
    pairing = _resolve_pairing(psi, phi, pairing, a_party, b_party, n_shared)
    if not 0 <= a_party < psi.n_parties or not 0 <= b_party < phi.n_parties:
        raise InvalidPairingError("unshared party out of range")
    # tensor_product keeps psi's order and appends phi's unpaired party (B) last
    joint = tensor_product(psi, phi, pairing)
    b_pos = joint.n_parties - 1
    shared = [p for p in range(psi.n_parties) if p != a_party]
    order = [a_party, b_pos] + [p for p, _ in sorted(pairing, key=lambda pq: shared.index(pq[0]))]
    return permute_parties(joint, order)


def merge_compose_even(
    psi: PureState,
    phi: PureState,
    pairing: Sequence[tuple[int, int]] | None = None,
    *,
    a_party: int = 0,
    b_party: int = 0,
) -> PureState:
    """Fuse two ``2n``-party AME states into a ``(2n+1)``-party AME state.

    Output parties are ``(A, B, C_1, ..., C_{2n-1})`` with the fused slots
    ordered as ``psi``'s shared parties.
    """
    if psi.n_parties != phi.n_parties or psi.n_parties % 2:
        raise PartyCountError(
            f"need two states with the same even party count, got {psi.n_parties} and {phi.n_parties}"
        )
    return _merge(psi, phi, pairing, a_party, b_party, psi.n_parties - 1)


def merge_compose_odd(
    psi: PureState,
    phi: PureState,
    pairing: Sequence[tuple[int, int]] | None = None,
    *,
    a_party: int = 0,
    b_party: int = 0,
) -> PureState:
    """Fuse two ``(2n+1)``-party AME states into an ``n``-uniform ``(2n+2)``-party state.

    The output has ``2n`` fused parties, one per shared slot.
    """
    if psi.n_parties != phi.n_parties or psi.n_parties % 2 == 0:
        raise PartyCountError(
            f"need two states with the same odd party count, got {psi.n_parties} and {phi.n_parties}"
        )
    return _merge(psi, phi, pairing, a_party, b_party, psi.n_parties - 1)
