"""Quasirandomness statistics over directed families and weight ensembles.

Conventions used throughout (stated once to avoid drift between
operations): the ordered edge indicator is zero on tuples with repeated
entries, weight functions are zero on tuples with repeated entries, and
supported-tuple counts range over distinct tuples only.

Counting statistics are exact integers (and exact rationals once the
density enters) via either a reference Python enumerator or a dense
integer contraction kernel; the two are interchangeable and cross-checked.
Weighted statistics offer an exact rational mode for small instances and a
float64 mode for large sweeps (reproducible to ~1e-9 relative).
"""

from __future__ import annotations

import math
import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

import numpy as np

from .core import (
    BudgetError,
    Hypergraph,
    ParseError,
    SetSystem,
    density,
    falling_factorial,
    spawn_rng,
    splitmix64,
)
from .counting import edge_table, labeled_copies, _set_partitions
from .doubling import build_mq, build_mq_prefixes

PY_ENUM_BUDGET = 300_000
EXACT_SUM_BUDGET = 2_000_000
DENSE_CHUNK_THRESHOLD = 1_000_000
FACTORIZED_FLOAT_BUDGET = 40_000_000
FACTORIZED_EXACT_BUDGET = 200_000


# ---------------------------------------------------------------------------
# directed families


@dataclass(frozen=True)
class DirectedFamily:
    """One directed edge set per member of an ordered set system.

    The edge set for a member with positions Q holds |Q|-tuples over
    [0, n), coordinates in sorted-position order.  Tuples with repeated
    entries are permitted in storage but can never participate in a
    supported tuple.
    """

    n: int
    system: SetSystem
    edge_sets: tuple[frozenset[tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        if len(self.edge_sets) != self.system.ell:
            raise ValueError("one edge set per member required")
        for m, edges in zip(self.system.members, self.edge_sets):
            for t in edges:
                if len(t) != len(m):
                    raise ValueError(f"tuple {t} has wrong arity for member {sorted(m)}")
                if any(v < 0 or v >= self.n for v in t):
                    raise ValueError(f"tuple {t} has a vertex outside [0, {self.n})")

    @classmethod
    def complete(cls, n: int, system: SetSystem, budget: int = EXACT_SUM_BUDGET) -> "DirectedFamily":
        """Every distinct-entry tuple, for every member."""
        sets = []
        for m in system.members:
            a = len(m)
            if n**a > budget:
                raise BudgetError(f"complete family for arity {a} needs {n**a} tuples")
            sets.append(frozenset(permutations(range(n), a)))
        return cls(n, system, tuple(sets))

    @classmethod
    def random(
        cls, n: int, system: SetSystem, p: float, rng: np.random.Generator,
        budget: int = EXACT_SUM_BUDGET,
    ) -> "DirectedFamily":
        """Each distinct-entry tuple included independently with probability p."""
        sets = []
        for m in system.members:
            a = len(m)
            if falling_factorial(n, a) > budget:
                raise BudgetError(f"random family for arity {a} over budget")
            candidates = list(permutations(range(n), a))
            mask = rng.random(len(candidates)) < p
            sets.append(frozenset(t for t, keep in zip(candidates, mask) if keep))
        return cls(n, system, tuple(sets))

    @classmethod
    def from_vertex_set(cls, n: int, system: SetSystem, subset, budget: int = EXACT_SUM_BUDGET) -> "DirectedFamily":
        """Product family: each member's edges are distinct tuples inside the set."""
        s = sorted(set(subset))
        sets = []
        for m in system.members:
            a = len(m)
            if len(s) ** a > budget:
                raise BudgetError("product family over budget")
            sets.append(frozenset(permutations(s, a)))
        return cls(n, system, tuple(sets))

    def member_array(self, idx: int) -> np.ndarray:
        """Dense indicator (int8) with repeated-coordinate cells zeroed."""
        arity = len(self.system.members[idx])
        if arity == 0:
            return np.array(1 if () in self.edge_sets[idx] else 0, dtype=np.int8)
        arr = np.zeros((self.n,) * arity, dtype=np.int8)
        edges = [t for t in self.edge_sets[idx] if len(set(t)) == arity]
        if edges:
            pts = np.array(sorted(edges), dtype=np.intp)
            arr[tuple(pts[:, j] for j in range(arity))] = 1
        return arr

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "system": self.system.to_json_obj(),
            "edges": [sorted(list(t) for t in s) for s in self.edge_sets],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DirectedFamily":
        try:
            n = int(obj["n"])
            system = SetSystem.from_json_obj(obj["system"])
            sets = tuple(
                frozenset(tuple(int(v) for v in t) for t in member) for member in obj["edges"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError("directed family JSON must have n, system, edges") from exc
        return cls(n, system, sets)


# ---------------------------------------------------------------------------
# dense contraction kernel


def _positions0(system: SetSystem, idx: int) -> tuple[int, ...]:
    """0-based sorted coordinate positions of a member."""
    return tuple(p - 1 for p in system.member_positions(idx))


def _family_factors(g: DirectedFamily) -> tuple[list, int]:
    """(positions, cleaned array) factors plus the scalar from empty members."""
    factors = []
    scalar = 1
    for i in range(g.system.ell):
        arr = g.member_array(i)
        if arr.ndim == 0:
            scalar *= int(arr)
        else:
            factors.append((_positions0(g.system, i), arr))
    return factors, scalar


def _sum_product_blocks(
    n: int,
    num_blocks: int,
    factors: list[tuple[tuple[int, ...], np.ndarray]],
    dtype,
    threads: int | None = None,
):
    """Sum over all assignments of ``num_blocks`` variables of the product of
    factor tables (factor axes labeled by block ids; repeats within a factor
    extract diagonals).  Blocks in no factor contribute a factor of n each.

    Large factors trigger chunking over one block, which is also the
    deterministic parallelization axis.
    """
    if not factors:
        return (n**num_blocks) if dtype is None else dtype(n**num_blocks)
    covered: set[int] = set()
    for blocks, _ in factors:
        covered |= set(blocks)
    free = num_blocks - len(covered)
    big = [i for i, (_, arr) in enumerate(factors) if arr.size > DENSE_CHUNK_THRESHOLD]
    if not big:
        total = _einsum_scalar(factors, dtype)
    else:
        chunk_block = factors[big[0]][0][0]
        total = _chunked_sum(n, factors, chunk_block, dtype, threads)
    return total * (n**free)


def _einsum_scalar(factors, dtype):
    letters = string.ascii_letters
    blocks = sorted({b for bl, _ in factors for b in bl})
    if len(blocks) > len(letters):
        raise BudgetError("too many contraction indices")
    sym = {b: letters[i] for i, b in enumerate(blocks)}
    spec = ",".join("".join(sym[b] for b in bl) for bl, _ in factors) + "->"
    arrays = [arr.astype(dtype) if arr.dtype != dtype else arr for _, arr in factors]
    out = np.einsum(spec, *arrays, optimize="greedy")
    return int(out) if dtype == np.int64 else float(out)


def _chunked_sum(n, factors, chunk_block, dtype, threads):
    def eval_chunk(lo: int, hi: int):
        sub_total = 0 if dtype == np.int64 else 0.0
        for v in range(lo, hi):
            sub = []
            for blocks, arr in factors:
                a, bl = arr, list(blocks)
                while chunk_block in bl:
                    axis = bl.index(chunk_block)
                    a = np.take(a, v, axis=axis)
                    bl.pop(axis)
                sub.append((tuple(bl), a))
            scalars = [a for bl, a in sub if not bl]
            tensors = [(bl, a) for bl, a in sub if bl]
            mult = 1
            for s in scalars:
                mult *= s.item()
            if mult == 0:
                continue
            if tensors:
                sub_total += mult * _einsum_scalar(tensors, dtype)
            else:
                sub_total += mult
        return sub_total

    if threads and threads > 1:
        bounds = np.linspace(0, n, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(eval_chunk, int(bounds[i]), int(bounds[i + 1]))
                for i in range(threads)
            ]
            return sum(f.result() for f in futures)
    return eval_chunk(0, n)


def _partition_mu(part) -> int:
    mu = 1
    for block in part:
        mu *= (-1) ** (len(block) - 1) * math.factorial(len(block) - 1)
    return mu


def _distinct_count_dense(n: int, k: int, factors, threads=None) -> int:
    """Count distinct k-tuples with all factor indicators equal to one, by
    signed sums over coincidence patterns of the coordinates."""
    total = 0
    for part in _set_partitions(list(range(k))):
        block_of = {}
        for b, block in enumerate(part):
            for v in block:
                block_of[v] = b
        collapsed = [(tuple(block_of[p] for p in pos), arr) for pos, arr in factors]
        total += _partition_mu(part) * _sum_product_blocks(
            n, len(part), collapsed, np.int64, threads
        )
    return total


# ---------------------------------------------------------------------------
# supported tuples and discrepancy


def iter_supported_tuples(g: DirectedFamily):
    """Stream the distinct k-tuples supported by the family, lexicographically."""
    system = g.system
    k, n = system.k, g.n
    by_last: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
    for i in range(system.ell):
        pos = system.member_positions(i)
        if pos:
            by_last.setdefault(max(pos), []).append((i, pos))
        elif () not in g.edge_sets[i]:
            return
    prefix: list[int] = []
    used: set[int] = set()

    def rec():
        depth = len(prefix)
        if depth == k:
            yield tuple(prefix)
            return
        for v in range(n):
            if v in used:
                continue
            prefix.append(v)
            used.add(v)
            if all(
                tuple(prefix[p - 1] for p in pos) in g.edge_sets[i]
                for i, pos in by_last.get(depth + 1, ())
            ):
                yield from rec()
            prefix.pop()
            used.discard(v)

    yield from rec()


def supported_tuples(g: DirectedFamily, engine: str = "auto", threads: int | None = None) -> int:
    """|K_k| for the family: distinct k-tuples whose every projection is an edge."""
    n, k = g.n, g.system.k
    if engine == "auto":
        engine = "python" if n**k <= PY_ENUM_BUDGET else "dense"
    if engine == "python":
        return sum(1 for _ in iter_supported_tuples(g))
    if engine == "dense":
        factors, scalar = _family_factors(g)
        if scalar == 0:
            return 0
        return _distinct_count_dense(n, k, factors, threads)
    raise ValueError(f"unknown engine {engine!r}")


def ordered_edges_in_family(g: DirectedFamily, h: Hypergraph, engine: str = "auto",
                            threads: int | None = None) -> int:
    """|E_ordered ∩ K_k| — supported tuples that are orderings of edges."""
    if h.n != g.n or h.k != g.system.k:
        raise ValueError("hypergraph and family shapes disagree")
    n, k = g.n, g.system.k
    if engine == "auto":
        engine = "python" if n**k <= PY_ENUM_BUDGET else "dense"
    if engine == "python":
        return sum(1 for t in iter_supported_tuples(g) if h.has_edge(t))
    factors, scalar = _family_factors(g)
    if scalar == 0:
        return 0
    factors = factors + [(tuple(range(k)), edge_table(h))]
    # the ordered-edge indicator is zero on repeats, so no coincidence
    # correction is needed
    return _sum_product_blocks(n, k, factors, np.int64, threads)


def disc_value(
    h: Hypergraph, d: Fraction, g: DirectedFamily, engine: str = "auto",
    threads: int | None = None,
) -> Fraction:
    """Signed witness value |E_ord ∩ K| - d |K|, exact."""
    d = Fraction(d)
    hits = ordered_edges_in_family(g, h, engine, threads)
    total = supported_tuples(g, engine, threads)
    return Fraction(hits) - d * total


def disc_complete_value(h: Hypergraph, d: Fraction) -> Fraction:
    """Witness value of the complete family, in closed form."""
    d = Fraction(d)
    ordered_edges = math.factorial(h.k) * len(h.edges)
    return Fraction(ordered_edges) - d * falling_factorial(h.n, h.k)


def degenerate_supported_count(g: DirectedFamily, threads: int | None = None) -> int:
    """Tuples with a repeated entry whose projections are all distinct edges.

    This is exactly the gap between the indicator-weighted sum and the
    distinct-tuple discrepancy count.
    """
    n, k = g.n, g.system.k
    factors, scalar = _family_factors(g)
    if scalar == 0:
        return 0
    all_tuples = _sum_product_blocks(n, k, factors, np.int64, threads)
    return all_tuples - _distinct_count_dense(n, k, factors, threads)


# ---------------------------------------------------------------------------
# weight ensembles


@dataclass(frozen=True)
class ConstantWeight:
    value: Fraction

    def raw(self, t) -> Fraction:
        return self.value


@dataclass(frozen=True)
class IndicatorWeight:
    edges: frozenset

    def raw(self, t) -> Fraction:
        return Fraction(1 if t in self.edges else 0)


@dataclass(frozen=True)
class TableWeight:
    entries: tuple[tuple[tuple[int, ...], Fraction], ...]

    def raw(self, t) -> Fraction:
        for key, val in self.entries:
            if key == t:
                return val
        return Fraction(0)


@dataclass(frozen=True)
class HashWeight:
    """Seeded pseudorandom rational weights on a fixed denominator grid."""

    seed: int
    index: int
    denominator: int = 64

    def raw(self, t) -> Fraction:
        h = splitmix64(self.seed ^ splitmix64(self.index + 0x5151))
        for v in t:
            h = splitmix64(h ^ (v + 0x9E37))
        span = 2 * self.denominator + 1
        return Fraction(h % span - self.denominator, self.denominator)


@dataclass(frozen=True)
class SignSplitWeight:
    """Positive or negative part of a base weight (values in [0, 1])."""

    base: object
    positive: bool

    def raw(self, t) -> Fraction:
        v = self.base.raw(t)
        return max(v, Fraction(0)) if self.positive else max(-v, Fraction(0))


@dataclass(frozen=True)
class WeightEnsemble:
    """One [-1,1]-valued weight function per member; zero on repeated entries."""

    n: int
    system: SetSystem
    weights: tuple

    def __post_init__(self) -> None:
        if len(self.weights) != self.system.ell:
            raise ValueError("one weight per member required")

    def value(self, idx: int, t: tuple[int, ...]) -> Fraction:
        if len(set(t)) != len(t):
            return Fraction(0)
        v = Fraction(self.weights[idx].raw(t))
        if not -1 <= v <= 1:
            raise ValueError(f"weight value {v} outside [-1, 1]")
        return v

    def product(self, v: tuple[int, ...]) -> Fraction:
        out = Fraction(1)
        for i in range(self.system.ell):
            pos = self.system.member_positions(i)
            w = self.value(i, tuple(v[p - 1] for p in pos))
            if w == 0:
                return Fraction(0)
            out *= w
        return out

    def member_table(self, idx: int, budget: int = EXACT_SUM_BUDGET) -> np.ndarray:
        """Dense float table with repeated-coordinate cells zeroed."""
        arity = len(self.system.members[idx])
        if self.n**arity > budget:
            raise BudgetError(f"weight table for arity {arity} over budget")
        if arity == 0:
            return np.array(float(self.weights[idx].raw(())), dtype=np.float64)
        arr = np.empty((self.n,) * arity, dtype=np.float64)
        for t in product(range(self.n), repeat=arity):
            arr[t] = float(self.weights[idx].raw(t)) if len(set(t)) == arity else 0.0
        return arr

    def sign_split(self, signs: str) -> "WeightEnsemble":
        """The ensemble of positive/negative parts selected by a +/- pattern."""
        if len(signs) != self.system.ell or any(c not in "+-" for c in signs):
            raise ValueError("sign pattern must be one +/- per member")
        return WeightEnsemble(
            self.n,
            self.system,
            tuple(SignSplitWeight(w, c == "+") for w, c in zip(self.weights, signs)),
        )


def weight_from_json_obj(obj: dict, index: int):
    kind = obj.get("type")
    if kind == "constant":
        return ConstantWeight(Fraction(str(obj["value"])))
    if kind == "indicator":
        return IndicatorWeight(frozenset(tuple(int(v) for v in t) for t in obj["edges"]))
    if kind == "random":
        return HashWeight(int(obj["seed"]), index, int(obj.get("denominator", 64)))
    if kind == "table":
        return TableWeight(
            tuple(
                (tuple(int(v) for v in key), Fraction(str(val)))
                for key, val in obj["entries"]
            )
        )
    raise ParseError(f"unknown weight type {kind!r}")


def ensemble_from_json_obj(obj: dict) -> WeightEnsemble:
    try:
        n = int(obj["n"])
        system = SetSystem.from_json_obj(obj["system"])
        weights = tuple(
            weight_from_json_obj(w, i) for i, w in enumerate(obj["weights"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("weight ensemble JSON must have n, system, weights") from exc
    return WeightEnsemble(n, system, weights)


def constant_ensemble(n: int, system: SetSystem, value: Fraction) -> WeightEnsemble:
    return WeightEnsemble(n, system, tuple(ConstantWeight(Fraction(value)) for _ in system.members))


def indicator_ensemble(g: DirectedFamily) -> WeightEnsemble:
    return WeightEnsemble(g.n, g.system, tuple(IndicatorWeight(s) for s in g.edge_sets))


def random_ensemble(n: int, system: SetSystem, seed: int, denominator: int = 64) -> WeightEnsemble:
    return WeightEnsemble(
        n, system, tuple(HashWeight(seed, i, denominator) for i in range(system.ell))
    )


def wdisc_value(
    h: Hypergraph, d: Fraction, w: WeightEnsemble, engine: str = "auto",
    budget: int = EXACT_SUM_BUDGET, threads: int | None = None,
) -> Fraction | float:
    """Sum over all k-tuples of the centered edge indicator times the weight
    product; exact rational in ``exact`` mode, float64 in ``float`` mode."""
    if h.n != w.n or h.k != w.system.k:
        raise ValueError("hypergraph and ensemble shapes disagree")
    n, k = h.n, h.k
    if engine == "auto":
        engine = "exact" if n**k <= PY_ENUM_BUDGET else "float"
    if engine == "exact":
        if n**k > budget:
            raise BudgetError(f"exact weighted sum over {n}^{k} tuples exceeds budget")
        d = Fraction(d)
        total = Fraction(0)
        for v in product(range(n), repeat=k):
            wt = w.product(v)
            if wt == 0:
                continue
            indicator = 1 if h.has_edge(v) else 0
            total += (indicator - d) * wt
        return total
    if engine == "float":
        factors = []
        scalar = 1.0
        for i in range(w.system.ell):
            table = w.member_table(i)
            if table.ndim == 0:
                scalar *= float(table)
            else:
                factors.append((_positions0(w.system, i), table))
        if scalar == 0.0:
            return 0.0
        e_factors = factors + [(tuple(range(k)), edge_table(h))]
        s_edge = _sum_product_blocks(n, k, e_factors, np.float64, threads)
        s_all = _sum_product_blocks(n, k, factors, np.float64, threads)
        return scalar * (s_edge - float(d) * s_all)
    raise ValueError(f"unknown engine {engine!r}")


# ---------------------------------------------------------------------------
# deviation


def dev_value(
    h: Hypergraph, d: Fraction, system: SetSystem, mode: str = "maps",
    budget: int = 2_000_000,
) -> Fraction:
    """Brute-force deviation: sum over maps (or injections) of the product of
    centered indicators over the doubled hypergraph's edges.  Exact."""
    d = Fraction(d)
    flat, _ = build_mq(system).to_hypergraph()
    v, edges = flat.n, flat.sorted_edges()
    ecount = len(edges)
    size = h.n**v if mode == "maps" else falling_factorial(h.n, v)
    if size > budget:
        raise BudgetError(f"brute-force deviation over {size} maps exceeds budget")
    if mode == "maps":
        iterator = product(range(h.n), repeat=v)
    elif mode == "injective":
        iterator = permutations(range(h.n), v)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    # every term is (1-d)^a (-d)^(e-a); tally a instead of multiplying per map
    tally = [0] * (ecount + 1)
    for phi in iterator:
        a = sum(1 for e in edges if h.has_edge(tuple(phi[x] for x in e)))
        tally[a] += 1
    return sum(
        (count * (1 - d) ** a * (-d) ** (ecount - a) for a, count in enumerate(tally)),
        Fraction(0),
    )


def _base_g_table(h: Hypergraph, d, mode: str, centered: bool) -> np.ndarray:
    table = edge_table(h)
    if mode == "float":
        base = table.astype(np.float64)
        return base - float(d) if centered else base
    d = Fraction(d)
    out = np.full(table.shape, -d if centered else Fraction(0), dtype=object)
    out[table.astype(bool)] = (1 - d) if centered else Fraction(1)
    return out


def dev_value_factorized(
    h: Hypergraph, d: Fraction, system: SetSystem, mode: str = "exact",
    centered: bool = True,
) -> Fraction | float:
    """Deviation over all maps, evaluated by inverting the doubling telescope:
    process the doublings in reverse, at each step contracting the two
    independent halves over the shared classes.

    With ``centered=False`` the same contraction evaluates the homomorphism
    count of the doubled hypergraph.  Exact mode uses rational tables and is
    meant for small instances; float mode is the large-sweep path.
    """
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    k, n = h.k, h.n
    stages = build_mq_prefixes(system)
    ell = system.ell
    pinned: list[set[int]] = [set() for _ in range(ell + 1)]
    for j in range(ell - 1, -1, -1):
        pinned[j] = pinned[j + 1] | set(system.members[j])
    budget = FACTORIZED_EXACT_BUDGET if mode == "exact" else FACTORIZED_FLOAT_BUDGET

    def axis_list(j: int) -> list[tuple[int, str]]:
        return [
            (c, tag)
            for c in sorted(pinned[j])
            for tag in sorted(stages[j].classes[c - 1])
        ]

    for j in range(ell + 1):
        if n ** len(axis_list(j)) > budget:
            raise BudgetError(
                f"factorized table would need {n}^{len(axis_list(j))} entries; "
                "use float mode or a smaller instance"
            )
    g = _base_g_table(h, d, mode, centered)
    drop = tuple(i for i in range(k) if (i + 1) not in pinned[0])
    s = g.sum(axis=drop) if drop else g
    axes = axis_list(0)
    letters = string.ascii_letters
    for j in range(ell):
        shared_classes = set(system.members[j])
        next_axes = axis_list(j + 1)
        sym: dict[tuple, str] = {}
        counter = 0

        def fresh():
            nonlocal counter
            if counter >= len(letters):
                raise BudgetError("too many contraction indices")
            counter += 1
            return letters[counter - 1]

        spec0 = []
        spec1 = []
        for c, tag in axes:
            if c in shared_classes:
                sm = fresh()
                sym[("s", c, tag)] = sm
                spec0.append(sm)
                spec1.append(sm)
            else:
                s0, s1 = fresh(), fresh()
                sym[("0", c, tag)] = s0
                sym[("1", c, tag)] = s1
                spec0.append(s0)
                spec1.append(s1)
        out = []
        for c, tag in next_axes:
            if c in shared_classes:
                out.append(sym[("s", c, tag)])
            else:
                out.append(sym[(tag[-1], c, tag[:-1])])
        spec = f"{''.join(spec0)},{''.join(spec1)}->{''.join(out)}"
        s = np.einsum(spec, s, s, optimize="greedy")
        axes = next_axes
    value = s.item() if hasattr(s, "item") else s
    return value if mode == "exact" else float(value)


def mq_hom_value(h: Hypergraph, system: SetSystem, mode: str = "float") -> Fraction | float:
    """Homomorphism count of the doubled hypergraph via the factorized path."""
    return dev_value_factorized(h, Fraction(0), system, mode=mode, centered=False)


# ---------------------------------------------------------------------------
# minimizer check


@dataclass(frozen=True)
class MinReport:
    density_value: Fraction
    density_ok: bool
    copies: int | None
    hom_upper_bound: float | None
    bound: Fraction
    count_ok: bool
    method: str

    def to_json_obj(self) -> dict:
        return {
            "density": str(self.density_value),
            "density_ok": self.density_ok,
            "copies": self.copies,
            "hom_upper_bound": self.hom_upper_bound,
            "bound": float(self.bound),
            "count_ok": self.count_ok,
            "method": self.method,
            "label": "certified" if self.method == "exact" else "certified-upper-bound",
        }


def min_check(
    h: Hypergraph, d: Fraction, eps: Fraction, system: SetSystem, method: str = "auto"
) -> MinReport:
    """Density lower bound and doubled-hypergraph copy upper bound.

    For patterns too large to count injectively, the homomorphism count is
    used as a certified upper bound on labeled copies: a pass is then still
    certified, a failure is inconclusive.
    """
    d, eps = Fraction(d), Fraction(eps)
    dens = density(h)
    density_ok = dens >= d - eps
    flat, _ = build_mq(system).to_hypergraph()
    v, e = flat.n, len(flat.edges)
    bound = (d**e + eps) * Fraction(h.n**v)
    if method == "auto":
        method = "exact" if v <= 8 else "hom-bound"
    if method == "exact":
        copies = labeled_copies(flat, h)
        return MinReport(dens, density_ok, copies, None, bound, Fraction(copies) <= bound, "exact")
    if method == "hom-bound":
        hom = mq_hom_value(h, system, mode="float")
        return MinReport(dens, density_ok, None, hom, bound, hom <= float(bound), "hom-bound")
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# weight rounding and witness search


def round_weights_to_family(
    w: WeightEnsemble, seed: int, signs: str, budget: int = EXACT_SUM_BUDGET
) -> DirectedFamily:
    """Randomized rounding: tuple f joins the member's edge set independently
    with probability given by the selected positive/negative weight part."""
    split = w.sign_split(signs)
    rng = spawn_rng(seed, "round")
    sets = []
    for i, member in enumerate(w.system.members):
        arity = len(member)
        if w.n**arity > budget:
            raise BudgetError(f"rounding member of arity {arity} over budget")
        chosen = set()
        for t in permutations(range(w.n), arity):
            p = split.value(i, t)
            if p == 1:
                chosen.add(t)
            elif p > 0 and rng.random() < float(p):
                chosen.add(t)
        sets.append(frozenset(chosen))
    return DirectedFamily(w.n, w.system, tuple(sets))


@dataclass(frozen=True)
class WitnessSearchResult:
    value: Fraction
    normalized: float
    descriptor: str
    trials: int
    seed: int

    def to_json_obj(self) -> dict:
        return {
            "value": str(self.value),
            "normalized": self.normalized,
            "descriptor": self.descriptor,
            "trials": self.trials,
            "seed": self.seed,
        }


def disc_witness_search(
    h: Hypergraph, d: Fraction, system: SetSystem, trials: int = 20, seed: int = 0,
    threads: int | None = None,
) -> WitnessSearchResult:
    """Heuristic search for a large-|value| discrepancy witness.

    Candidates: the complete family (always, the trials=0 baseline),
    co-neighborhood product families masked by sampled vertices, random
    families, and rounded random ensembles.  Reproducible given the seed;
    no claim of reaching the true supremum.
    """
    d = Fraction(d)
    norm = h.n ** h.k
    best_value = disc_complete_value(h, d)
    best_desc = "complete-family"
    rng = spawn_rng(seed, "witness-search")

    def consider(value: Fraction, desc: str):
        nonlocal best_value, best_desc
        if abs(value) > abs(best_value):
            best_value, best_desc = value, desc

    for t in range(trials):
        kind = t % 3
        try:
            if kind == 0:
                v = int(rng.integers(h.n))
                linked = {u for e in h.edges if v in e for u in e if u != v}
                for name, subset in ((f"link[{v}]", linked),
                                     (f"colink[{v}]", set(range(h.n)) - linked - {v})):
                    if len(subset) < h.k:
                        continue
                    fam = DirectedFamily.from_vertex_set(h.n, system, subset)
                    consider(disc_value(h, d, fam, threads=threads), name)
            elif kind == 1:
                fam = DirectedFamily.random(h.n, system, 0.5, rng)
                consider(disc_value(h, d, fam, threads=threads), f"random[{t}]")
            else:
                ens = random_ensemble(h.n, system, seed=int(rng.integers(2**32)))
                signs = "".join("+" if rng.random() < 0.5 else "-" for _ in system.members)
                fam = round_weights_to_family(ens, int(rng.integers(2**32)), signs)
                consider(disc_value(h, d, fam, threads=threads), f"rounded[{t}]")
        except BudgetError:
            continue
    return WitnessSearchResult(best_value, float(abs(best_value)) / norm, best_desc, trials, seed)


# ---------------------------------------------------------------------------
# implication constants


def implication_constants(
    system: SetSystem, delta: Fraction, f: Hypergraph | None = None
) -> dict[str, Fraction]:
    """The four epsilon(delta) choices from the equivalence chain, exact."""
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    ell = system.ell
    out = {
        "disc_to_wdisc": delta / 2 ** (ell + 1),
        "cl_to_dev": delta / 2 ** (2 * 2**ell),
        "dev_to_wdisc": delta ** (2**ell),
    }
    if f is not None:
        e = len(f.edges)
        if e < 1:
            raise ValueError("the counting implication needs a pattern with edges")
        out["wdisc_to_cl"] = (delta / 2) / (2**e - 1)
    return out
