"""Random set systems, the parity hypergraph, the discrepancy-violating
witness family, and the separation experiment."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .core import Hypergraph, SetSystem, density, falling_factorial, spawn_rng
from .statistics import (
    DirectedFamily,
    WitnessSearchResult,
    disc_value,
    disc_witness_search,
    ordered_edges_in_family,
    supported_tuples,
)


@dataclass(frozen=True)
class ISetSystem:
    """A family of i-subsets of [0, n), optionally recording its seed."""

    n: int
    i: int
    members: frozenset[tuple[int, ...]]
    seed: int | None = None

    def __post_init__(self) -> None:
        for t in self.members:
            if len(t) != self.i or list(t) != sorted(set(t)):
                raise ValueError(f"member {t} must be a strictly increasing {self.i}-tuple")
            if t[0] < 0 or t[-1] >= self.n:
                raise ValueError(f"member {t} outside [0, {self.n})")

    def __contains__(self, t) -> bool:
        return tuple(t) in self.members

    @property
    def size(self) -> int:
        return len(self.members)


def random_iset_system(n: int, i: int, seed: int) -> ISetSystem:
    """Each i-subset of [0, n) included independently with probability 1/2."""
    if not 1 <= i <= n:
        raise ValueError(f"need 1 <= i <= n, got i={i}, n={n}")
    rng = spawn_rng(seed, "iset-system")
    candidates = list(combinations(range(n), i))
    mask = rng.random(len(candidates)) < 0.5
    return ISetSystem(n, i, frozenset(t for t, keep in zip(candidates, mask) if keep), seed)


def parity_hypergraph(b: ISetSystem, system: SetSystem) -> Hypergraph:
    """Edge iff an odd number of member projections of the naturally ordered
    k-set lie in the i-set family.

    Deterministic in (family, system); repeated calls are bit-identical.
    """
    k = system.k
    if any(len(m) != b.i for m in system.members):
        raise ValueError(f"every member must have size i={b.i}")
    if b.i >= k:
        raise ValueError(f"need i < k, got i={b.i}, k={k}")
    positions = [tuple(p - 1 for p in system.member_positions(idx)) for idx in range(system.ell)]
    n = b.n
    combos = list(combinations(range(n), k))
    if b.i <= 2 and combos:
        arr = np.array(combos, dtype=np.intp)
        if b.i == 1:
            table = np.zeros(n, dtype=np.int8)
            for (v,) in b.members:
                table[v] = 1
            parity = np.zeros(len(combos), dtype=np.int64)
            for pos in positions:
                parity += table[arr[:, pos[0]]]
        else:
            table = np.zeros((n, n), dtype=np.int8)
            for u, v in b.members:
                table[u, v] = 1
            parity = np.zeros(len(combos), dtype=np.int64)
            for pos in positions:
                parity += table[arr[:, pos[0]], arr[:, pos[1]]]
        edges = frozenset(combos[idx] for idx in np.nonzero(parity % 2 == 1)[0])
    else:
        members = b.members
        edges = frozenset(
            v
            for v in combos
            if sum(1 for pos in positions if tuple(v[p] for p in pos) in members) % 2 == 1
        )
    return Hypergraph(k, n, edges)


def failing_witness_family(b: ISetSystem, system: SetSystem) -> DirectedFamily:
    """The family whose member edges are the tuples avoiding the i-set family.

    Supported tuples then have every projection outside the family, so their
    parity is zero: none of them is an edge of the parity hypergraph.
    """
    if any(len(m) != b.i for m in system.members):
        raise ValueError(f"every member must have size i={b.i}")
    from itertools import permutations

    avoiding = frozenset(
        t for t in permutations(range(b.n), b.i) if tuple(sorted(t)) not in b.members
    )
    return DirectedFamily(b.n, system, tuple(avoiding for _ in system.members))


def random_hypergraph(n: int, k: int, p: Fraction | float, seed: int) -> Hypergraph:
    """Each k-set an edge independently with probability p, seeded."""
    p = float(p)
    if not 0 <= p <= 1:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = spawn_rng(seed, "random-hypergraph")
    candidates = list(combinations(range(n), k))
    mask = rng.random(len(candidates)) < p
    return Hypergraph(k, n, frozenset(t for t, keep in zip(candidates, mask) if keep))


@dataclass(frozen=True)
class SeparationReport:
    """Outcome of the two-sided separation experiment.

    The violation side is certified (exact counts); the smaller-system side
    is sampled evidence only, since the quantifier over witnesses cannot be
    exhausted.
    """

    n: int
    k: int
    i: int
    seed: int
    eta: float
    density_value: Fraction
    density_ok: bool
    intersection_count: int
    supported_count: int
    supported_ok: bool
    delta: Fraction
    violation_value: Fraction
    violation_ok: bool
    witness_max_normalized: float
    witness_tolerance: float
    witness_ok: bool
    witness_result: WitnessSearchResult

    @property
    def passed(self) -> bool:
        return (
            self.density_ok
            and self.intersection_count == 0
            and self.supported_ok
            and self.violation_ok
            and self.witness_ok
        )

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "i": self.i,
            "seed": self.seed,
            "eta": self.eta,
            "checks": {
                "density": {
                    "value": float(self.density_value),
                    "ok": self.density_ok,
                    "label": "certified",
                },
                "empty_intersection": {
                    "value": self.intersection_count,
                    "ok": self.intersection_count == 0,
                    "label": "certified",
                },
                "supported_share": {
                    "value": self.supported_count,
                    "ok": self.supported_ok,
                    "label": "certified",
                },
                "violation": {
                    "value": str(self.violation_value),
                    "delta": str(self.delta),
                    "ok": self.violation_ok,
                    "label": "certified",
                },
                "small_system_discrepancy": {
                    "max_normalized": self.witness_max_normalized,
                    "tolerance": self.witness_tolerance,
                    "ok": self.witness_ok,
                    "label": "sampled",
                },
            },
            "passed": self.passed,
        }


def verify_separation(
    n: int,
    k: int,
    i: int,
    q_system: SetSystem,
    u_system: SetSystem,
    seed: int,
    eta: float = 0.02,
    witness_trials: int = 20,
    witness_tolerance: float = 0.03,
    threads: int | None = None,
) -> SeparationReport:
    """Build the parity hypergraph and check that it defeats the larger
    system's discrepancy while passing sampled checks for the smaller one."""
    if q_system.k != k or u_system.k != k:
        raise ValueError("set systems must live on ground set [1..k]")
    q_members = set(q_system.members)
    u_members = set(u_system.members)
    if not u_members < q_members:
        raise ValueError("the small system must be a proper subfamily of the large one")
    if any(len(m) != i for m in q_system.members):
        raise ValueError(f"members must all have size i={i}")
    if len(q_members - u_members) != 1:
        warnings.warn("analysis covers a single-set difference; results are exploratory")

    b = random_iset_system(n, i, seed)
    h = parity_hypergraph(b, q_system)
    dens = density(h)
    density_ok = abs(dens - Fraction(1, 2)) <= Fraction(eta).limit_denominator(10**6)

    family = failing_witness_family(b, q_system)
    inter = ordered_edges_in_family(family, h, threads=threads)
    supported = supported_tuples(family, threads=threads)
    ell = q_system.ell
    share_low = (Fraction(1, 2**ell) - Fraction(eta).limit_denominator(10**6)) * n**k
    supported_ok = Fraction(supported) >= share_low

    delta = Fraction(1, 2 ** (ell + 3))
    violation_value = abs(Fraction(inter) - Fraction(1, 2) * supported)
    violation_ok = violation_value > delta * n**k

    search = disc_witness_search(
        h, Fraction(1, 2), u_system, trials=witness_trials, seed=seed, threads=threads
    )
    witness_ok = search.normalized <= witness_tolerance

    return SeparationReport(
        n=n,
        k=k,
        i=i,
        seed=seed,
        eta=eta,
        density_value=dens,
        density_ok=density_ok,
        intersection_count=inter,
        supported_count=supported,
        supported_ok=supported_ok,
        delta=delta,
        violation_value=violation_value,
        violation_ok=violation_ok,
        witness_max_normalized=search.normalized,
        witness_tolerance=witness_tolerance,
        witness_ok=witness_ok,
        witness_result=search,
    )
