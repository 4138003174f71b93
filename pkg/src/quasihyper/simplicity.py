"""Decide whether a hypergraph admits orderings certifying simplicity
relative to a set system, and verify such certificates."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .core import BudgetError, Edge, Hypergraph, SetSystem

MAX_EDGES = 12
MAX_K = 5


@dataclass(frozen=True)
class SimplicityCertificate:
    """An edge order plus one vertex ordering per edge.

    For every edge f_i and every earlier edge f_h, the positions (1-based)
    of the vertices of f_i lying in f_h must fit inside some member of the
    set system; the certificate is directly checkable.
    """

    edge_order: tuple[Edge, ...]
    vertex_orders: tuple[tuple[int, ...], ...]


def _first_valid_order(
    edge: Edge, placed: list[Edge], members: tuple[frozenset[int], ...]
) -> tuple[int, ...] | None:
    """Lexicographically first vertex ordering covering all back-intersections.

    Only positions of vertices shared with placed edges are constrained, so
    orderings are scanned in lexicographic order of the sorted vertex list
    with early rejection per placed edge.
    """
    intersections = [frozenset(edge) & frozenset(h) for h in placed]
    if not members:
        return tuple(sorted(edge)) if not intersections else None
    if not any(intersections):
        return tuple(sorted(edge))
    for perm in permutations(sorted(edge)):
        pos = {v: r for r, v in enumerate(perm, start=1)}
        if all(
            any(frozenset(pos[v] for v in iv) <= q for q in members)
            for iv in intersections
        ):
            return perm
    return None


def is_q_simple(
    f: Hypergraph, system: SetSystem, force: bool = False
) -> SimplicityCertificate | None:
    """Search for a simplicity certificate; None means the backtracking
    search over edge orders and per-edge vertex orders was exhausted.

    The search places edges one at a time in input (canonical) order,
    keeping the first feasible vertex ordering per edge; feasibility of a
    candidate edge depends only on the set of already placed edges, so
    failed placement sets are memoized.
    """
    if f.k != system.k:
        raise ValueError(f"uniformity mismatch: hypergraph k={f.k}, system k={system.k}")
    if not force and (len(f.edges) > MAX_EDGES or f.k > MAX_K):
        raise BudgetError(
            f"search refused for {len(f.edges)} edges, k={f.k}; pass force=True to override"
        )
    edges = f.sorted_edges()
    m = len(edges)
    members = system.members
    chosen_orders: list[tuple[int, ...]] = []
    chosen_edges: list[Edge] = []
    failed: set[frozenset[int]] = set()

    def dfs(placed: frozenset[int]) -> bool:
        if len(placed) == m:
            return True
        if placed in failed:
            return False
        for idx in range(m):
            if idx in placed:
                continue
            order = _first_valid_order(edges[idx], chosen_edges, members)
            if order is None:
                continue
            chosen_edges.append(edges[idx])
            chosen_orders.append(order)
            if dfs(placed | {idx}):
                return True
            chosen_edges.pop()
            chosen_orders.pop()
        failed.add(placed)
        return False

    if dfs(frozenset()):
        return SimplicityCertificate(tuple(chosen_edges), tuple(chosen_orders))
    return None


def verify_certificate(
    f: Hypergraph, system: SetSystem, cert: SimplicityCertificate
) -> bool:
    """Check a certificate's shape and its back-intersection containments."""
    edges = list(cert.edge_order)
    if sorted(edges) != f.sorted_edges():
        return False
    if len(cert.vertex_orders) != len(edges):
        return False
    for e, order in zip(edges, cert.vertex_orders):
        if sorted(order) != list(e):
            return False
    for i in range(len(edges)):
        pos = {v: r for r, v in enumerate(cert.vertex_orders[i], start=1)}
        for h in range(i):
            shared = frozenset(edges[i]) & frozenset(edges[h])
            positions = frozenset(pos[v] for v in shared)
            if not any(positions <= q for q in system.members):
                return False
    return True
