"""Set system algebra: antichain reduction, degrees, and the covering preorder."""

from __future__ import annotations

from itertools import permutations

from .core import SetSystem


def antichain(system: SetSystem) -> SetSystem:
    """Inclusion-maximal members, preserving first-occurrence order.

    Every member of the input is contained in some member of the output,
    and the output is an antichain.
    """
    maximal = [m for m in system.members if not any(m < other for other in system.members)]
    return SetSystem(system.k, tuple(maximal))


def degree(system: SetSystem, element: int) -> int:
    """Number of members containing the ground element (1-based)."""
    if not 1 <= element <= system.k:
        raise ValueError(f"element {element} outside ground set [1..{system.k}]")
    return sum(1 for m in system.members if element in m)


def precedes(a: SetSystem, b: SetSystem) -> tuple[bool, tuple[int, ...] | None]:
    """Decide whether some bijection of [k] maps every member of ``a`` into
    the downset generated by ``b``.

    The downset generated by ``b`` is the union of the power sets of its
    members, so the test per member is containment in some member of ``b``.
    Returns (True, phi) for the lexicographically first witness, where
    phi[i-1] is the image of ground element i, or (False, None).  Decision
    is exhaustive over all k! bijections.
    """
    if a.k != b.k:
        raise ValueError(f"mismatched ground sets: {a.k} != {b.k}")
    for phi in permutations(range(1, a.k + 1)):
        if all(
            any(frozenset(phi[x - 1] for x in m) <= q for q in b.members)
            for m in a.members
        ):
            return True, phi
    return False, None
