"""The doubling operation, the recursively doubled hypergraphs, and size identities."""

from __future__ import annotations

from .core import PartiteHypergraph, SetSystem
from .setsystem import degree


def single_edge(k: int) -> PartiteHypergraph:
    """The k-partite k-uniform hypergraph consisting of one edge."""
    return PartiteHypergraph(k, tuple(("",) for _ in range(k)), frozenset({("",) * k}))


def double(f: PartiteHypergraph, q) -> PartiteHypergraph:
    """Duplicate ``f`` while identifying the classes indexed by ``q``.

    Classes indexed by q are kept; every other class is doubled, its tags
    extended by the copy bit.  Each edge spawns one edge per copy bit.
    Doubling by the full index set is the identity.
    """
    q = frozenset(q)
    if not q <= frozenset(range(1, f.k + 1)):
        raise ValueError(f"doubling index set {sorted(q)} outside [1..{f.k}]")
    classes = tuple(
        tuple(sorted(tags)) if (j + 1) in q else tuple(sorted(t + a for t in tags for a in "01"))
        for j, tags in enumerate(f.classes)
    )
    edges = frozenset(
        tuple(e[j] if (j + 1) in q else e[j] + a for j in range(f.k))
        for e in f.edges
        for a in "01"
    )
    return PartiteHypergraph(f.k, classes, edges)


def build_mq_prefixes(system: SetSystem) -> list[PartiteHypergraph]:
    """All prefix stages of the doubled hypergraph, from the single edge up."""
    full = frozenset(range(1, system.k + 1))
    if full in system.members:
        raise ValueError("the full index set [k] is not allowed as a member")
    stages = [single_edge(system.k)]
    for q in system.members:
        stages.append(double(stages[-1], q))
    return stages


def build_mq(system: SetSystem) -> PartiteHypergraph:
    """Apply one doubling per member, in member order, to the single edge."""
    return build_mq_prefixes(system)[-1]


def mq_size(system: SetSystem) -> tuple[int, int]:
    """Closed-form (vertex count, edge count) of the doubled hypergraph."""
    full = frozenset(range(1, system.k + 1))
    if full in system.members:
        raise ValueError("the full index set [k] is not allowed as a member")
    ell = system.ell
    vertices = sum(2 ** (ell - degree(system, i)) for i in range(1, system.k + 1))
    return vertices, 2**ell


def _partite_key(m: PartiteHypergraph):
    return (m.k, tuple(frozenset(tags) for tags in m.classes), m.edges)


def _relabel(m: PartiteHypergraph, mappings: dict[int, dict[str, str]]) -> PartiteHypergraph:
    """Apply per-class tag bijections (1-based class keys)."""
    classes = tuple(
        tuple(sorted(mappings.get(j + 1, {}).get(t, t) for t in tags))
        for j, tags in enumerate(m.classes)
    )
    edges = frozenset(
        tuple(mappings.get(j + 1, {}).get(t, t) for j, t in enumerate(e)) for e in m.edges
    )
    return PartiteHypergraph(m.k, classes, edges)


def verify_doubling_commutes(f: PartiteHypergraph, q, r) -> bool:
    """Check db_q(db_r(f)) equals db_r(db_q(f)) after tag canonicalization.

    Classes outside q and r receive one bit from each step, in application
    order; canonicalization reorders those two bits by a fixed key on the
    index sets, after which the two results must be equal as labeled objects.
    """
    q, r = frozenset(q), frozenset(r)
    a = double(double(f, q), r)
    b = double(double(f, r), q)
    if q == r:
        return _partite_key(a) == _partite_key(b)
    outside = [j for j in range(1, f.k + 1) if j not in q and j not in r]
    # a appended (q-bit, r-bit); b appended (r-bit, q-bit); swap in whichever
    # object disagrees with the sorted-key order
    target = b if tuple(sorted(q)) <= tuple(sorted(r)) else a
    mappings = {
        j: {t: t[:-2] + t[-1] + t[-2] for t in target.classes[j - 1]} for j in outside
    }
    fixed = _relabel(target, mappings)
    other = a if target is b else b
    return _partite_key(fixed) == _partite_key(other)


def canonical_mq(m: PartiteHypergraph, steps) -> PartiteHypergraph:
    """Reorder each vertex tag into the sorted-step order.

    ``steps`` is the sequence of index sets applied to build ``m``; a class
    holds one tag bit per step excluding it, in application order.  Sorting
    the bits by a fixed key on the steps yields a form independent of the
    order the doublings were applied in.
    """
    steps = [frozenset(s) for s in steps]
    mappings: dict[int, dict[str, str]] = {}
    for j in range(1, m.k + 1):
        mine = [s for s in steps if j not in s]
        order = sorted(range(len(mine)), key=lambda i: tuple(sorted(mine[i])))
        mappings[j] = {t: "".join(t[i] for i in order) for t in m.classes[j - 1]}
    return _relabel(m, mappings)


def exponent_identity(system: SetSystem) -> tuple[bool, int, int]:
    """Check the telescoping size identity against actually built prefixes.

    The left side sums, over each doubling step, the shared-class vertex
    count of the prefix it acts on (weighted by the remaining halvings),
    plus the final vertex count; the right side is k * 2^ell.
    """
    stages = build_mq_prefixes(system)
    ell = system.ell
    lhs = 0
    for j in range(ell):
        shared = sum(len(stages[j].classes[c - 1]) for c in system.members[j])
        lhs += 2 ** (ell - j - 1) * shared
    lhs += stages[-1].num_vertices
    rhs = system.k * 2**ell
    return lhs == rhs, lhs, rhs
