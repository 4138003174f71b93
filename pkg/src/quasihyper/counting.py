"""Homomorphism and copy counting.

Three exact engines are provided and cross-checked:

* backtracking search over pattern vertices in a connectivity-aware order
  (with component factorization, valid for homomorphisms only);
* dense tensor elimination (the performance kernel for larger hosts);
* an exhaustive all-maps oracle for small instances.

Injective counts come from the backtracking search directly or, for larger
hosts, from homomorphism counts of vertex-identification quotients combined
with signed coincidence-pattern weights.  All counts are arbitrary-precision
integers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product

import numpy as np

from .core import BudgetError, Edge, Hypergraph, falling_factorial

ORACLE_BUDGET = 10_000_000
ELIMINATION_TABLE_BUDGET = 30_000_000
MOBIUS_MAX_VERTICES = 9


@lru_cache(maxsize=4)
def edge_table(h: Hypergraph) -> np.ndarray:
    """Dense ordered-edge indicator over V^k (int8); zero on repeated entries."""
    table = np.zeros((h.n,) * h.k, dtype=np.int8)
    if h.edges:
        arr = np.array(h.sorted_edges(), dtype=np.intp)
        for perm in permutations(range(h.k)):
            table[tuple(arr[:, p] for p in perm)] = 1
    return table


def _components(f: Hypergraph) -> list[list[int]]:
    parent = list(range(f.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in f.edges:
        r = find(e[0])
        for v in e[1:]:
            parent[find(v)] = r
    groups: dict[int, list[int]] = {}
    for v in range(f.n):
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def _greedy_order(vertices: list[int], edges: list[Edge]) -> tuple[list[int], list[list[Edge]]]:
    """Order vertices by most edges completed at placement time; returns the
    order and, per position, the edges that become fully placed there."""
    remaining = set(vertices)
    placed: set[int] = set()
    order: list[int] = []
    checks: list[list[Edge]] = []
    while remaining:
        best = None
        best_score = (-1, 0)
        for v in sorted(remaining):
            completed = sum(1 for e in edges if v in e and set(e) <= placed | {v})
            touching = sum(1 for e in edges if v in e and (set(e) & placed))
            score = (completed, touching)
            if score > best_score:
                best, best_score = v, score
        order.append(best)
        placed.add(best)
        remaining.remove(best)
        checks.append([e for e in edges if best in e and set(e) <= placed])
    return order, checks


def _count_maps(
    order: list[int],
    checks: list[list[Edge]],
    h: Hypergraph,
    injective: bool,
    first_images=None,
) -> int:
    """Backtracking count of maps (injective or not) respecting edge checks."""
    host_edges = h.edges
    k = h.k
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def rec(depth: int) -> int:
        if depth == len(order):
            return 1
        v = order[depth]
        total = 0
        images = first_images if (depth == 0 and first_images is not None) else range(h.n)
        for img in images:
            if injective and img in used:
                continue
            assignment[v] = img
            ok = True
            for e in checks[depth]:
                key = tuple(sorted(assignment[u] for u in e))
                if len(set(key)) != k or key not in host_edges:
                    ok = False
                    break
            if ok:
                if injective:
                    used.add(img)
                total += rec(depth + 1)
                if injective:
                    used.discard(img)
        del assignment[v]
        return total

    return rec(0)


def hom_count_backtracking(f: Hypergraph, h: Hypergraph, threads: int | None = None) -> int:
    """Backtracking homomorphism count; disconnected patterns factor into
    component products (valid for homomorphisms, never for injective counts)."""
    total = 1
    for comp in _components(f):
        comp_edges = [e for e in f.edges if e[0] in comp]
        if not comp_edges:
            total *= h.n
            continue
        order, checks = _greedy_order(comp, sorted(comp_edges))
        if threads and threads > 1:
            chunks = np.array_split(np.arange(h.n), threads)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [
                    pool.submit(_count_maps, order, checks, h, False, [int(x) for x in chunk])
                    for chunk in chunks
                    if len(chunk)
                ]
                total *= sum(fut.result() for fut in futures)
        else:
            total *= _count_maps(order, checks, h, False)
    return total


def hom_count_oracle(f: Hypergraph, h: Hypergraph, budget: int = ORACLE_BUDGET) -> int:
    """Exhaustive sum over all n^{v(F)} maps."""
    if h.n**f.n > budget:
        raise BudgetError(f"oracle needs {h.n}^{f.n} maps, over budget {budget}")
    edges = f.sorted_edges()
    count = 0
    for phi in product(range(h.n), repeat=f.n):
        if all(h.has_edge(tuple(phi[v] for v in e)) for e in edges):
            count += 1
    return count


def hom_count_elimination(f: Hypergraph, h: Hypergraph) -> int:
    """Exact homomorphism count by greedy tensor variable elimination.

    Intermediate tables hold Python-exact values only while every entry is
    bounded by n^{v(F)}; the guard keeps that below the int64 range.
    """
    if f.n == 0:
        return 1
    if f.n * math.log2(max(h.n, 2)) >= 62:
        raise BudgetError(f"elimination would overflow int64 for n={h.n}, v={f.n}")
    base = edge_table(h).astype(np.int64)
    factors: list[tuple[tuple[int, ...], np.ndarray]] = [(e, base) for e in f.sorted_edges()]
    covered = {v for e in f.edges for v in e}
    result = h.n ** (f.n - len(covered))
    while factors:
        alive = sorted({v for vars_, _ in factors for v in vars_})
        best_v, best_union = alive[0], None
        for v in alive:
            union: set[int] = set()
            for vars_, _ in factors:
                if v in vars_:
                    union |= set(vars_)
            if best_union is None or len(union) < len(best_union):
                best_v, best_union = v, union
        involved = [(vars_, arr) for vars_, arr in factors if best_v in vars_]
        factors = [(vars_, arr) for vars_, arr in factors if best_v not in vars_]
        out_vars = tuple(sorted(set(best_union) - {best_v}))
        if h.n ** max(len(out_vars), 1) > ELIMINATION_TABLE_BUDGET:
            raise BudgetError("elimination table would exceed the size budget")
        symbols = {v: chr(ord("a") + i) for i, v in enumerate(sorted(best_union))}
        spec = ",".join("".join(symbols[v] for v in vars_) for vars_, _ in involved)
        spec += "->" + "".join(symbols[v] for v in out_vars)
        new_arr = np.einsum(spec, *[arr for _, arr in involved], optimize="greedy")
        if out_vars:
            factors.append((out_vars, new_arr))
        else:
            result *= int(new_arr)
    return result


def hom_count(
    f: Hypergraph, h: Hypergraph, method: str = "auto", threads: int | None = None
) -> int:
    """Number of maps V(F) -> V(H) sending every edge of F to an edge of H;
    maps with repeated images on an edge never count."""
    if f.k != h.k:
        raise ValueError(f"uniformity mismatch: {f.k} != {h.k}")
    if method == "auto":
        try:
            return hom_count_elimination(f, h)
        except BudgetError:
            return hom_count_backtracking(f, h, threads=threads)
    if method == "backtracking":
        return hom_count_backtracking(f, h, threads=threads)
    if method == "elimination":
        return hom_count_elimination(f, h)
    if method == "oracle":
        return hom_count_oracle(f, h)
    raise ValueError(f"unknown method {method!r}")


def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [first]] + part[i + 1 :]
        yield [[first]] + part


def labeled_copies_mobius(f: Hypergraph, h: Hypergraph) -> int:
    """Injective homomorphism count via signed sums over coincidence patterns.

    Identifying pattern vertices according to a set partition yields a
    quotient pattern; a quotient edge with a repeated block can never map to
    an edge, so those partitions contribute nothing.
    """
    if f.n > MOBIUS_MAX_VERTICES:
        raise BudgetError(f"quotient expansion limited to {MOBIUS_MAX_VERTICES} pattern vertices")
    total = 0
    for part in _set_partitions(list(range(f.n))):
        block_of = {}
        for b, block in enumerate(part):
            for v in block:
                block_of[v] = b
        edges = set()
        degenerate = False
        for e in f.edges:
            q = tuple(sorted(block_of[v] for v in e))
            if len(set(q)) != f.k:
                degenerate = True
                break
            edges.add(q)
        if degenerate:
            continue
        mu = 1
        for block in part:
            sz = len(block)
            mu *= (-1) ** (sz - 1) * math.factorial(sz - 1)
        quotient = Hypergraph(f.k, len(part), frozenset(edges))
        total += mu * hom_count(quotient, h)
    return total


def labeled_copies_backtracking(f: Hypergraph, h: Hypergraph) -> int:
    """Injective backtracking count; components share one image pool, so no
    factorization shortcut applies."""
    if f.n > h.n:
        return 0
    vertices = list(range(f.n))
    order, checks = _greedy_order(vertices, f.sorted_edges())
    return _count_maps(order, checks, h, injective=True)


def labeled_copies(f: Hypergraph, h: Hypergraph, method: str = "auto") -> int:
    """Number of labeled copies (injective homomorphisms) of F in H."""
    if f.k != h.k:
        raise ValueError(f"uniformity mismatch: {f.k} != {h.k}")
    if f.n > h.n:
        return 0
    if method == "auto":
        if h.n**f.n <= 2_000_000 or f.n > MOBIUS_MAX_VERTICES:
            return labeled_copies_backtracking(f, h)
        return labeled_copies_mobius(f, h)
    if method == "backtracking":
        return labeled_copies_backtracking(f, h)
    if method == "mobius":
        return labeled_copies_mobius(f, h)
    raise ValueError(f"unknown method {method!r}")


def _check_spanning(fsub: Hypergraph, f: Hypergraph) -> None:
    if fsub.n != f.n or fsub.k != f.k:
        raise ValueError("subpattern must span the same vertex set and uniformity")
    if not fsub.edges <= f.edges:
        raise ValueError("subpattern edges must be a subset of the pattern edges")


def induced_wrt_count_enumeration(fsub: Hypergraph, f: Hypergraph, h: Hypergraph) -> int:
    """Injections realizing exactly the edges of ``fsub`` among those of ``f``."""
    _check_spanning(fsub, f)
    if f.n > h.n:
        return 0
    order, checks = _greedy_order(list(range(f.n)), f.sorted_edges())
    sub_edges = fsub.edges
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def rec(depth: int) -> int:
        if depth == len(order):
            return 1
        v = order[depth]
        total = 0
        for img in range(h.n):
            if img in used:
                continue
            assignment[v] = img
            ok = True
            for e in checks[depth]:
                image = tuple(sorted(assignment[u] for u in e))
                if (image in h.edges) != (e in sub_edges):
                    ok = False
                    break
            if ok:
                used.add(img)
                total += rec(depth + 1)
                used.discard(img)
        del assignment[v]
        return total

    return rec(0)


def induced_wrt_count_inclusion_exclusion(
    fsub: Hypergraph, f: Hypergraph, h: Hypergraph
) -> int:
    """Alternating sum of labeled-copy counts over patterns between the two."""
    _check_spanning(fsub, f)
    extra = sorted(f.edges - fsub.edges)
    total = 0
    for r in range(len(extra) + 1):
        for add in combinations(extra, r):
            pattern = Hypergraph(f.k, f.n, fsub.edges | frozenset(add))
            total += (-1) ** r * labeled_copies(pattern, h)
    return total


def induced_wrt_count(
    fsub: Hypergraph, f: Hypergraph, h: Hypergraph, method: str = "enumeration"
) -> int:
    if method == "enumeration":
        return induced_wrt_count_enumeration(fsub, f, h)
    if method == "inclusion-exclusion":
        return induced_wrt_count_inclusion_exclusion(fsub, f, h)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class CountReport:
    """Labeled-copy count against the d^{e} n^{v} target."""

    copies: int
    expected: Fraction
    normalized_error: Fraction
    pattern_vertices: int
    pattern_edges: int

    def to_json_obj(self) -> dict:
        return {
            "copies": self.copies,
            "expected": str(self.expected),
            "normalized_error": str(self.normalized_error),
            "normalized_error_float": float(self.normalized_error),
            "pattern_vertices": self.pattern_vertices,
            "pattern_edges": self.pattern_edges,
        }


def cl_check(h: Hypergraph, f: Hypergraph, d: Fraction) -> CountReport:
    """Exact copy count, the density-power target, and the normalized error.

    The caller is responsible for ``f`` being simple relative to the ambient
    set system; the report is meaningful either way.
    """
    copies = labeled_copies(f, h)
    d = Fraction(d)
    expected = d ** len(f.edges) * Fraction(h.n**f.n)
    err = abs(Fraction(copies) - expected) / Fraction(h.n**f.n)
    return CountReport(copies, expected, err, f.n, len(f.edges))
