"""The acceptance battery: exact identities, oracle equivalences, and the
calibrated statistical experiments, shared by the CLI suite command and the
test suite."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .core import Hypergraph, SetSystem, density, falling_factorial, spawn_rng
from .counting import (
    induced_wrt_count_enumeration,
    induced_wrt_count_inclusion_exclusion,
    labeled_copies,
)
from .doubling import (
    build_mq,
    double,
    exponent_identity,
    mq_size,
    single_edge,
    verify_doubling_commutes,
)
from .setsystem import degree
from .simplicity import is_q_simple
from .statistics import (
    DirectedFamily,
    degenerate_supported_count,
    dev_value,
    dev_value_factorized,
    disc_value,
    disc_witness_search,
    implication_constants,
    indicator_ensemble,
    min_check,
    wdisc_value,
)
from .constructions import random_hypergraph, verify_separation


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: str
    elapsed: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} ({self.elapsed:6.2f}s): {self.name} -- {self.details}"


def _timed(number: int, name: str, fn) -> CriterionResult:
    start = time.perf_counter()
    passed, details = fn()
    return CriterionResult(number, name, passed, details, time.perf_counter() - start)


def _all_k3_systems() -> list[SetSystem]:
    """Every ordered-by-lex system over [1..3] excluding the full set."""
    pool = [frozenset(s) for r in range(3) for s in combinations((1, 2, 3), r)]
    systems = []
    for r in range(len(pool) + 1):
        for chosen in combinations(pool, r):
            systems.append(SetSystem(3, tuple(chosen)))
    return systems


def _random_system(rng, k: int, max_members: int, allow_empty: bool = True) -> SetSystem:
    pool = [
        frozenset(s)
        for r in range(0 if allow_empty else 1, k)
        for s in combinations(range(1, k + 1), r)
    ]
    ell = int(rng.integers(0, max_members + 1))
    ell = min(ell, len(pool))
    idx = rng.permutation(len(pool))[:ell]
    return SetSystem(k, tuple(pool[i] for i in idx))


def criterion_1(seed: int = 1) -> CriterionResult:
    def run():
        checked = 0
        for system in _all_k3_systems():
            built = build_mq(system)
            if (built.num_vertices, built.num_edges) != mq_size(system):
                return False, f"size mismatch for {system.to_json_obj()}"
            checked += 1
        rng = spawn_rng(seed, "criterion-1")
        for k in (4, 5):
            for _ in range(100):
                system = _random_system(rng, k, 8)
                built = build_mq(system)
                if (built.num_vertices, built.num_edges) != mq_size(system):
                    return False, f"size mismatch for {system.to_json_obj()}"
                checked += 1
        return True, f"{checked} systems match the closed form exactly"

    return _timed(1, "doubled-hypergraph sizes", run)


def criterion_2(seed: int = 2) -> CriterionResult:
    def run():
        rng = spawn_rng(seed, "criterion-2")
        for trial in range(100):
            k = int(rng.integers(2, 5))
            base = single_edge(k)
            # a couple of random doublings makes the base nontrivial
            for _ in range(int(rng.integers(0, 3))):
                q = frozenset(
                    int(x) for x in rng.permutation(k)[: int(rng.integers(0, k + 1))] + 1
                )
                base = double(base, q)
            q = frozenset(int(x) for x in rng.permutation(k)[: int(rng.integers(0, k + 1))] + 1)
            r = frozenset(int(x) for x in rng.permutation(k)[: int(rng.integers(0, k + 1))] + 1)
            if not verify_doubling_commutes(base, q, r):
                return False, f"commutativity failed for trial {trial}, q={sorted(q)}, r={sorted(r)}"
        return True, "100 random (F, Q, R) triples commute after canonicalization"

    return _timed(2, "doubling commutativity", run)


def criterion_3(seed: int = 3) -> CriterionResult:
    def run():
        rng = spawn_rng(seed, "criterion-3")
        for trial in range(1000):
            k = int(rng.integers(2, 7))
            system = _random_system(rng, k, 7)
            ok, lhs, rhs = exponent_identity(system)
            if not ok:
                return False, f"identity failed: {lhs} != {rhs} for {system.to_json_obj()}"
        return True, "1000 random ordered systems satisfy the exponent identity"

    return _timed(3, "exponent identity", run)


def criterion_4(seed: int = 4) -> CriterionResult:
    def run():
        rng = spawn_rng(seed, "criterion-4")
        done = 0
        while done < 50:
            k = int(rng.integers(2, 4))
            system = _random_system(rng, k, 2, allow_empty=False)
            flat, _ = build_mq(system).to_hypergraph()
            n = int(rng.integers(3, 6))
            if n**flat.n > 200_000:
                continue
            h = random_hypergraph(n, k, 0.5, int(rng.integers(2**32)))
            d = Fraction(int(rng.integers(0, 5)), 4)
            brute = dev_value(h, d, system, mode="maps")
            fact = dev_value_factorized(h, d, system, mode="exact")
            if brute != fact:
                return False, f"mismatch at trial {done}: {brute} vs {fact}"
            done += 1
        return True, "50 instances: factorized equals all-maps brute force exactly"

    return _timed(4, "deviation oracle equivalence", run)


def criterion_5(seed: int = 5) -> CriterionResult:
    def run():
        system = SetSystem.from_lists(2, [[1], [2]])
        pattern, _ = build_mq(system).to_hypergraph()
        rng = spawn_rng(seed, "criterion-5")
        sub_edge_sets = [
            frozenset(sub)
            for r in range(len(pattern.edges) + 1)
            for sub in combinations(sorted(pattern.edges), r)
        ]
        for trial in range(20):
            n = int(rng.integers(4, 9))
            h = random_hypergraph(n, 2, 0.5, int(rng.integers(2**32)))
            total = 0
            for edges in sub_edge_sets:
                fsub = Hypergraph(2, pattern.n, edges)
                direct = induced_wrt_count_enumeration(fsub, pattern, h)
                via_ie = induced_wrt_count_inclusion_exclusion(fsub, pattern, h)
                if direct != via_ie:
                    return False, f"mismatch for spanning subpattern {sorted(edges)}"
                total += direct
            if total != falling_factorial(n, pattern.n):
                return False, f"partition identity failed at n={n}"
        return True, "20 graphs: enumeration equals inclusion-exclusion, counts partition"

    return _timed(5, "induced-count inclusion-exclusion", run)


def criterion_6(seed: int = 6) -> CriterionResult:
    def run():
        rng = spawn_rng(seed, "criterion-6")
        for trial in range(50):
            k = int(rng.integers(2, 4))
            n = int(rng.integers(k + 1, 11))
            h = random_hypergraph(n, k, 0.5, int(rng.integers(2**32)))
            system = _random_system(rng, k, 3)
            fam = DirectedFamily.random(n, system, 0.5, rng)
            d = Fraction(int(rng.integers(0, 7)), 6)
            lhs = disc_value(h, d, fam, engine="python")
            wd = wdisc_value(h, d, indicator_ensemble(fam), engine="exact")
            gap = d * degenerate_supported_count(fam)
            if lhs != wd + gap:
                return False, f"bridge failed at trial {trial}: {lhs} != {wd} + {gap}"
        return True, "50 instances: disc = wdisc(indicator) + d * degenerate count, exactly"

    return _timed(6, "discrepancy/weighted bridge", run)


def criterion_7(seed: int = 7) -> CriterionResult:
    def run():
        rng = spawn_rng(seed, "criterion-7")
        for trial in range(50):
            k = int(rng.integers(2, 4))
            n = int(rng.integers(k + 1, 14))
            h = random_hypergraph(n, k, float(rng.random()), int(rng.integers(2**32)))
            system = _random_system(rng, k, 3)
            fam = DirectedFamily.complete(n, system)
            if disc_value(h, density(h), fam) != 0:
                return False, f"nonzero at trial {trial}"
        return True, "50 instances: complete-family witness value is exactly zero at d = density"

    return _timed(7, "zero-discrepancy identity", run)


def _random_linear(rng, n: int, edges: int) -> Hypergraph:
    chosen: list[tuple[int, ...]] = []
    attempts = 0
    while len(chosen) < edges and attempts < 500:
        attempts += 1
        e = tuple(sorted(int(x) for x in rng.choice(n, size=3, replace=False)))
        if all(len(set(e) & set(f)) <= 1 for f in chosen) and e not in chosen:
            chosen.append(e)
    return Hypergraph(3, n, frozenset(chosen))


def _random_nonlinear(rng, n: int, edges: int) -> Hypergraph:
    base = _random_linear(rng, n, max(edges - 1, 1))
    for e in base.sorted_edges():
        for w in range(n):
            if w not in e:
                clash = tuple(sorted((e[0], e[1], w)))
                if clash not in base.edges:
                    return Hypergraph(3, n, base.edges | {clash})
    raise RuntimeError("could not build a nonlinear instance")


def criterion_8(seed: int = 8) -> CriterionResult:
    def run():
        rng = spawn_rng(seed, "criterion-8")
        singles = SetSystem.uniform(3, 1)
        pairs = SetSystem.uniform(3, 2)
        for idx in range(10):
            lin = _random_linear(rng, 9 + idx % 3, 5)
            nonlin = _random_nonlinear(rng, 9 + idx % 3, 5)
            if is_q_simple(lin, singles) is None:
                return False, f"linear instance {idx} not recognized"
            if is_q_simple(nonlin, singles) is not None:
                return False, f"nonlinear instance {idx} wrongly certified"
            for f in (lin, nonlin):
                if is_q_simple(f, pairs) is None:
                    return False, "an instance failed the full-strength system"
        for system in _all_k3_systems():
            flat, _ = build_mq(system).to_hypergraph()
            if is_q_simple(flat, system, force=True) is None:
                return False, f"doubled hypergraph not simple for {system.to_json_obj()}"
        return True, "linear endpoints and all 128 doubled hypergraphs certified"

    return _timed(8, "simplicity endpoints", run)


def criterion_9(seeds=(901, 902, 903, 904, 905), witness_trials: int = 20) -> CriterionResult:
    def run():
        q_system = SetSystem.uniform(3, 2)
        u_system = SetSystem(3, q_system.members[:-1])
        worst = 0.0
        for seed in seeds:
            report = verify_separation(
                200, 3, 2, q_system, u_system, seed,
                eta=0.02, witness_trials=witness_trials, witness_tolerance=0.03,
            )
            if not report.density_ok:
                return False, f"seed {seed}: density {float(report.density_value):.4f} off 1/2"
            if report.intersection_count != 0:
                return False, f"seed {seed}: intersection {report.intersection_count} != 0"
            if not report.supported_ok:
                return False, f"seed {seed}: supported count too small"
            if not report.violation_ok:
                return False, f"seed {seed}: no certified violation"
            if not report.witness_ok:
                return False, (
                    f"seed {seed}: sampled discrepancy {report.witness_max_normalized:.4f}"
                )
            worst = max(worst, report.witness_max_normalized)
        return True, f"5 seeds pass; worst sampled small-system discrepancy {worst:.4f}"

    return _timed(9, "separation experiment", run)


def criterion_10(seeds=(1001, 1002, 1003, 1004, 1005)) -> CriterionResult:
    def run():
        singles = SetSystem.singletons(3)
        two_triples = Hypergraph.from_edges(3, 5, [(0, 1, 2), (0, 3, 4)])
        flat, _ = build_mq(singles).to_hypergraph()
        for seed in seeds:
            h = random_hypergraph(60, 3, 0.5, seed)
            d = Fraction(1, 2)
            dev = dev_value_factorized(h, d, singles, mode="float")
            if abs(dev) > 0.02 * 60**flat.n:
                return False, f"seed {seed}: normalized deviation {abs(dev) / 60**flat.n:.4f}"
            copies = labeled_copies(two_triples, h)
            err = abs(copies - float(d) ** 2 * 60**5) / 60**5
            if err > 0.03:
                return False, f"seed {seed}: counting error {err:.4f}"
            report = min_check(h, d, Fraction(1, 20), singles)
            if not (report.density_ok and report.count_ok):
                return False, f"seed {seed}: minimizer check failed"
        return True, "5 seeds: deviation <= 0.02, counting error <= 0.03, minimizer ok"

    return _timed(10, "random hypergraph quasirandomness", run)


def criterion_11(seed: int = 11) -> CriterionResult:
    def run():
        rng = spawn_rng(seed, "criterion-11")
        for trial in range(20):
            k = int(rng.integers(2, 5))
            system = _random_system(rng, k, 4)
            ell = system.ell
            delta = Fraction(int(rng.integers(1, 16)), 16)
            pattern_edges = int(rng.integers(1, 5))
            f = Hypergraph.from_edges(
                k,
                k + pattern_edges,
                [tuple(range(j, j + k)) for j in range(pattern_edges)],
            )
            table = implication_constants(system, delta, f)
            # recomputed from the statements, term by term
            if table["disc_to_wdisc"] != delta * Fraction(1, 2) ** (ell + 1):
                return False, "disc->wdisc constant mismatch"
            if table["wdisc_to_cl"] != Fraction(delta, 2) * Fraction(1, 2**pattern_edges - 1):
                return False, "wdisc->cl constant mismatch"
            if table["cl_to_dev"] != delta * Fraction(1, 4) ** (2**ell):
                return False, "cl->dev constant mismatch"
            expected = Fraction(1)
            for _ in range(2**ell):
                expected *= delta
            if table["dev_to_wdisc"] != expected:
                return False, "dev->wdisc constant mismatch"
        return True, "20 random inputs cross-check against independent formulas"

    return _timed(11, "implication constants", run)


QUICK_CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_11,
]
FULL_EXTRA = [criterion_9, criterion_10]


def run_suite(full: bool = False, echo=None) -> list[CriterionResult]:
    results = []
    runners = list(QUICK_CRITERIA) + (FULL_EXTRA if full else [])
    runners.sort(key=lambda fn: int(fn.__name__.split("_")[1]))
    for fn in runners:
        result = fn()
        results.append(result)
        if echo is not None:
            echo(result.line())
    return results
