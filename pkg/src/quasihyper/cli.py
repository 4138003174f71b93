"""Command-line entry point.

JSON goes to standard output (stable key order, byte-identical across runs
in exact mode); human-readable notes go to standard error.  Exit codes:
0 success, 1 a verification or suite check failed, 2 usage or input error,
3 a size budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .core import (
    BudgetError,
    Hypergraph,
    ParseError,
    QuasihyperError,
    SetSystem,
    density,
    dump_json,
    parse_hypergraph,
    parse_scalar,
    scalar_str,
    spawn_rng,
)
from .counting import cl_check, hom_count, induced_wrt_count, labeled_copies
from .doubling import build_mq, exponent_identity, mq_size
from .setsystem import antichain, degree, precedes
from .simplicity import is_q_simple, verify_certificate
from .statistics import (
    DirectedFamily,
    disc_value,
    disc_witness_search,
    dev_value,
    dev_value_factorized,
    ensemble_from_json_obj,
    implication_constants,
    min_check,
    random_ensemble,
    supported_tuples,
    wdisc_value,
)
from .constructions import (
    failing_witness_family,
    parity_hypergraph,
    random_iset_system,
    verify_separation,
)
from .acceptance import run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(obj, fmt: str) -> None:
    if fmt == "csv":
        flat = _flatten(obj)
        for key, value in flat:
            print(f"{key},{value}")
    else:
        print(dump_json(obj))


def _flatten(obj, prefix=""):
    rows = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            rows.extend(_flatten(obj[key], f"{prefix}{key}." if prefix else f"{key}."))
    elif isinstance(obj, (list, tuple)):
        rows.append((prefix.rstrip("."), json.dumps(obj)))
    else:
        rows.append((prefix.rstrip("."), obj))
    return rows


def _load_hypergraph(path: str) -> Hypergraph:
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return Hypergraph.from_json_obj(json.loads(text))
    return parse_hypergraph(text)


def _load_system(path: str) -> SetSystem:
    system = SetSystem.from_json_obj(json.loads(Path(path).read_text()))
    if system.has_empty_member():
        _info("note: set system contains the empty set; supported but unusual")
    return system


def _load_family(path: str) -> DirectedFamily:
    return DirectedFamily.from_json_obj(json.loads(Path(path).read_text()))


def _report_base(args) -> dict:
    return {
        "version": __version__,
        "mode": args.mode,
        "seed": args.seed,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasihyper",
        description="hypergraph quasirandomness statistics, constructions, and experiments",
    )
    parser.add_argument("--seed", type=int, default=None, help="root seed (default: env QUASIHYPER_SEED or 0)")
    parser.add_argument("--exact", dest="mode", action="store_const", const="exact")
    parser.add_argument("--float", dest="mode", action="store_const", const="float")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--json", dest="fmt", action="store_const", const="json")
    parser.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    parser.add_argument("--tolerance", type=float, default=None)
    parser.add_argument("--config", type=str, default=None, help="key=value file mirroring flags")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setsystem", help="antichain reduction, degrees, preorder")
    ssub = p.add_subparsers(dest="subcommand", required=True)
    q = ssub.add_parser("antichain")
    q.add_argument("--setsystem", required=True)
    q = ssub.add_parser("degree")
    q.add_argument("--setsystem", required=True)
    q.add_argument("--element", type=int, required=True)
    q = ssub.add_parser("precedes")
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)

    p = sub.add_parser("mq", help="build the doubled hypergraph")
    p.add_argument("--setsystem", required=True)
    p.add_argument("--sizes-only", action="store_true")
    p.add_argument("--check-identity", action="store_true")

    p = sub.add_parser("simple", help="simplicity certificate search")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--setsystem", required=True)
    p.add_argument("--force", action="store_true")

    p = sub.add_parser("count", help="pattern counting")
    p.add_argument("--pattern", required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--mode", dest="count_mode", choices=["hom", "copies", "induced"], default="hom")
    p.add_argument("--pattern-sub", default=None)

    p = sub.add_parser("disc", help="discrepancy witness evaluation/search")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--setsystem", required=True)
    p.add_argument("--density", required=True)
    p.add_argument("--witness", default=None)
    p.add_argument("--complete", action="store_true")
    p.add_argument("--random-trials", type=int, default=None)

    p = sub.add_parser("wdisc", help="weighted discrepancy evaluation")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--setsystem", required=True)
    p.add_argument("--density", required=True)
    p.add_argument("--weights", default=None)
    p.add_argument("--random-trials", type=int, default=None)

    p = sub.add_parser("dev", help="deviation evaluation")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--setsystem", required=True)
    p.add_argument("--density", required=True)
    p.add_argument("--mode", dest="dev_mode", choices=["maps", "injective", "factorized"], default="factorized")
    p.add_argument("--budget", type=int, default=2_000_000)

    p = sub.add_parser("min", help="minimizer property check")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--setsystem", required=True)
    p.add_argument("--density", required=True)
    p.add_argument("--epsilon", required=True)

    p = sub.add_parser("constants", help="implication constants table")
    p.add_argument("--setsystem", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--pattern", default=None)

    p = sub.add_parser("construct", help="parity constructions")
    csub = p.add_subparsers(dest="subcommand", required=True)
    q = csub.add_parser("parity")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--i", type=int, required=True)
    q.add_argument("--setsystem", required=True)
    q.add_argument("--emit-witness", action="store_true")

    p = sub.add_parser("verify", help="verification experiments")
    vsub = p.add_subparsers(dest="subcommand", required=True)
    q = vsub.add_parser("separation")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--i", type=int, required=True)
    q.add_argument("--q", dest="q_path", required=True)
    q.add_argument("--u", dest="u_path", required=True)
    q.add_argument("--eta", type=float, default=0.02)
    q.add_argument("--witnesses", type=int, default=20)

    p = sub.add_parser("chain", help="equivalence-chain experiment on one hypergraph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--setsystem", required=True)
    p.add_argument("--p", dest="edge_p", required=True)
    p.add_argument("--ensembles", type=int, default=10)

    p = sub.add_parser("suite", help="run the acceptance battery")
    tier = p.add_mutually_exclusive_group()
    tier.add_argument("--quick", action="store_true")
    tier.add_argument("--full", action="store_true")

    return parser


def _apply_config(args) -> None:
    config: dict[str, str] = {}
    if args.config:
        for line in Path(args.config).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError(f"bad config line: {line!r}")
            key, _, value = line.partition("=")
            config[key.strip()] = value.strip()
    if args.seed is None:
        if "seed" in config:
            args.seed = int(config["seed"])
        elif os.environ.get("QUASIHYPER_SEED"):
            args.seed = int(os.environ["QUASIHYPER_SEED"])
        else:
            args.seed = 0
    if args.mode is None:
        args.mode = config.get("mode", "exact")
    if args.threads is None:
        args.threads = int(config["threads"]) if "threads" in config else None
    if args.fmt is None:
        args.fmt = config.get("format", "json")
    if args.tolerance is None:
        args.tolerance = float(config["tolerance"]) if "tolerance" in config else 0.03


def _scalar_out(value, mode: str):
    if isinstance(value, Fraction):
        return scalar_str(value) if mode == "exact" else float(value)
    return value


def _cmd_setsystem(args) -> int:
    if args.subcommand == "antichain":
        system = _load_system(args.setsystem)
        _emit(antichain(system).to_json_obj(), args.fmt)
    elif args.subcommand == "degree":
        system = _load_system(args.setsystem)
        _emit({"element": args.element, "degree": degree(system, args.element)}, args.fmt)
    else:
        a, b = _load_system(args.a), _load_system(args.b)
        ok, phi = precedes(a, b)
        _emit({"precedes": ok, "witness": list(phi) if phi else None}, args.fmt)
    return EXIT_OK


def _cmd_mq(args) -> int:
    system = _load_system(args.setsystem)
    vertices, edges = mq_size(system)
    out = _report_base(args)
    out.update({"vertices": vertices, "edges": edges})
    if args.check_identity:
        ok, lhs, rhs = exponent_identity(system)
        out["exponent_identity"] = {"holds": ok, "lhs": lhs, "rhs": rhs}
    if not args.sizes_only:
        out["hypergraph"] = build_mq(system).to_json_obj()
    _emit(out, args.fmt)
    return EXIT_OK


def _cmd_simple(args) -> int:
    f = _load_hypergraph(args.hypergraph)
    system = _load_system(args.setsystem)
    cert = is_q_simple(f, system, force=args.force)
    if cert is None:
        _emit({"simple": False, "proof": "exhausted"}, args.fmt)
    else:
        assert verify_certificate(f, system, cert)
        _emit(
            {
                "simple": True,
                "edge_order": [list(e) for e in cert.edge_order],
                "vertex_orders": [list(o) for o in cert.vertex_orders],
            },
            args.fmt,
        )
    return EXIT_OK


def _cmd_count(args) -> int:
    pattern = _load_hypergraph(args.pattern)
    host = _load_hypergraph(args.host)
    start = time.perf_counter()
    if args.count_mode == "hom":
        value = hom_count(pattern, host, threads=args.threads)
    elif args.count_mode == "copies":
        value = labeled_copies(pattern, host)
    else:
        if not args.pattern_sub:
            raise ParseError("induced mode needs --pattern-sub")
        sub = _load_hypergraph(args.pattern_sub)
        value = induced_wrt_count(sub, pattern, host)
    elapsed = time.perf_counter() - start
    out = _report_base(args)
    out.update({"value": value, "elapsed": round(elapsed, 6), "count_mode": args.count_mode})
    _emit(out, args.fmt)
    return EXIT_OK


def _cmd_disc(args) -> int:
    h = _load_hypergraph(args.hypergraph)
    system = _load_system(args.setsystem)
    d = parse_scalar(args.density)
    out = _report_base(args)
    out.update({"n": h.n, "k": h.k})
    if args.witness:
        fam = _load_family(args.witness)
        value = disc_value(h, d, fam, threads=args.threads)
        out["supported"] = supported_tuples(fam, threads=args.threads)
    elif args.complete:
        fam = DirectedFamily.complete(h.n, system)
        value = disc_value(h, d, fam, threads=args.threads)
    elif args.random_trials is not None:
        result = disc_witness_search(h, d, system, trials=args.random_trials, seed=args.seed)
        out.update(result.to_json_obj())
        value = result.value
    else:
        raise ParseError("disc needs --witness, --complete, or --random-trials")
    out["value"] = _scalar_out(value, args.mode)
    out["normalized"] = float(abs(value)) / h.n**h.k
    _emit(out, args.fmt)
    return EXIT_OK


def _cmd_wdisc(args) -> int:
    h = _load_hypergraph(args.hypergraph)
    system = _load_system(args.setsystem)
    d = parse_scalar(args.density)
    engine = "exact" if args.mode == "exact" else "float"
    out = _report_base(args)
    out.update({"n": h.n, "k": h.k})
    if args.weights:
        ensemble = ensemble_from_json_obj(json.loads(Path(args.weights).read_text()))
        value = wdisc_value(h, d, ensemble, engine=engine, threads=args.threads)
    elif args.random_trials is not None:
        best = None
        for t in range(args.random_trials):
            ensemble = random_ensemble(h.n, system, seed=args.seed + t)
            v = wdisc_value(h, d, ensemble, engine=engine, threads=args.threads)
            if best is None or abs(v) > abs(best):
                best = v
        value = best if best is not None else Fraction(0)
        out["trials"] = args.random_trials
    else:
        raise ParseError("wdisc needs --weights or --random-trials")
    out["value"] = _scalar_out(value, args.mode)
    out["normalized"] = float(abs(value)) / h.n**h.k
    _emit(out, args.fmt)
    return EXIT_OK


def _cmd_dev(args) -> int:
    h = _load_hypergraph(args.hypergraph)
    system = _load_system(args.setsystem)
    d = parse_scalar(args.density)
    flat, _ = build_mq(system).to_hypergraph()
    if args.dev_mode == "factorized":
        value = dev_value_factorized(h, d, system, mode=args.mode)
    else:
        value = dev_value(h, d, system, mode=args.dev_mode, budget=args.budget)
    out = _report_base(args)
    out.update(
        {
            "n": h.n,
            "k": h.k,
            "dev_mode": args.dev_mode,
            "pattern_vertices": flat.n,
            "value": _scalar_out(value, args.mode),
            "normalized": float(abs(value)) / float(h.n) ** flat.n,
        }
    )
    _emit(out, args.fmt)
    return EXIT_OK


def _cmd_min(args) -> int:
    h = _load_hypergraph(args.hypergraph)
    system = _load_system(args.setsystem)
    report = min_check(h, parse_scalar(args.density), parse_scalar(args.epsilon), system)
    out = _report_base(args)
    out.update(report.to_json_obj())
    _emit(out, args.fmt)
    return EXIT_OK


def _cmd_constants(args) -> int:
    system = _load_system(args.setsystem)
    delta = parse_scalar(args.delta)
    pattern = _load_hypergraph(args.pattern) if args.pattern else None
    table = implication_constants(system, delta, pattern)
    out = _report_base(args)
    out["delta"] = scalar_str(delta)
    out["epsilons"] = {key: scalar_str(val) for key, val in table.items()}
    _emit(out, args.fmt)
    return EXIT_OK


def _cmd_construct(args) -> int:
    system = _load_system(args.setsystem)
    b = random_iset_system(args.n, args.i, args.seed)
    h = parity_hypergraph(b, system)
    out = _report_base(args)
    out.update(
        {
            "n": args.n,
            "i": args.i,
            "system_size": b.size,
            "density": float(density(h)),
            "hypergraph": h.to_json_obj(),
        }
    )
    if args.emit_witness:
        out["witness_family"] = failing_witness_family(b, system).to_json_obj()
    _emit(out, args.fmt)
    return EXIT_OK


def _cmd_verify(args) -> int:
    q_system = _load_system(args.q_path)
    u_system = _load_system(args.u_path)
    report = verify_separation(
        args.n,
        args.i,
        args.i,
        q_system,
        u_system,
        args.seed,
        eta=args.eta,
        witness_trials=args.witnesses,
        witness_tolerance=args.tolerance,
        threads=args.threads,
    )
    out = _report_base(args)
    out.update(report.to_json_obj())
    _emit(out, args.fmt)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def chain_experiment(
    n: int,
    k: int,
    system: SetSystem,
    p: Fraction,
    seed: int,
    ensembles: int = 10,
    threads: int | None = None,
) -> dict:
    """Generate a random hypergraph and measure each statistic in the
    equivalence chain next to the constants table, for side-by-side reading."""
    from .constructions import random_hypergraph

    h = random_hypergraph(n, k, p, seed)
    d = Fraction(p)
    flat, _ = build_mq(system).to_hypergraph()
    dev = dev_value_factorized(h, d, system, mode="float")
    wdisc_max = 0.0
    for t in range(ensembles):
        ensemble = random_ensemble(n, system, seed=seed * 1000 + t)
        wdisc_max = max(wdisc_max, abs(wdisc_value(h, d, ensemble, engine="float", threads=threads)))
    library = {
        "single_edge": Hypergraph.from_edges(k, k, [tuple(range(k))]),
        "matching_pair": Hypergraph.from_edges(
            k, 2 * k, [tuple(range(k)), tuple(range(k, 2 * k))]
        ),
        "shared_vertex_pair": Hypergraph.from_edges(
            k, 2 * k - 1, [tuple(range(k)), (0,) + tuple(range(k, 2 * k - 1))]
        ),
    }
    counts = {}
    for name, pattern in library.items():
        if is_q_simple(pattern, system) is None:
            continue
        report = cl_check(h, pattern, d)
        counts[name] = {
            "copies": report.copies,
            "normalized_error": float(report.normalized_error),
        }
    minimizer = min_check(h, d, Fraction(1, 20), system)
    return {
        "n": n,
        "k": k,
        "p": scalar_str(Fraction(p)),
        "seed": seed,
        "density": float(density(h)),
        "deviation": {
            "value": dev,
            "normalized": abs(dev) / float(n) ** flat.n,
            "label": "certified-float",
        },
        "wdisc_sampled_max": {
            "normalized": wdisc_max / n**k,
            "ensembles": ensembles,
            "label": "sampled",
        },
        "counting": counts,
        "minimizer": minimizer.to_json_obj(),
        "constants": {
            key: scalar_str(val)
            for key, val in implication_constants(
                system, Fraction(1, 4), library["shared_vertex_pair"]
            ).items()
        },
    }


def _cmd_chain(args) -> int:
    system = _load_system(args.setsystem)
    report = chain_experiment(
        args.n, args.k, system, parse_scalar(args.edge_p), args.seed,
        ensembles=args.ensembles, threads=args.threads,
    )
    out = _report_base(args)
    out.update(report)
    _emit(out, args.fmt)
    return EXIT_OK


def _cmd_suite(args) -> int:
    results = run_suite(full=args.full, echo=_info)
    out = _report_base(args)
    out["tier"] = "full" if args.full else "quick"
    out["criteria"] = [
        {
            "number": r.number,
            "name": r.name,
            "passed": r.passed,
            "details": r.details,
            "elapsed": round(r.elapsed, 3),
        }
        for r in results
    ]
    out["passed"] = all(r.passed for r in results)
    _emit(out, args.fmt)
    return EXIT_OK if out["passed"] else EXIT_CHECK_FAILED


_DISPATCH = {
    "setsystem": _cmd_setsystem,
    "mq": _cmd_mq,
    "simple": _cmd_simple,
    "count": _cmd_count,
    "disc": _cmd_disc,
    "wdisc": _cmd_wdisc,
    "dev": _cmd_dev,
    "min": _cmd_min,
    "constants": _cmd_constants,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "chain": _cmd_chain,
    "suite": _cmd_suite,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return _DISPATCH[args.command](args)
    except BudgetError as exc:
        _info(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except (ParseError, QuasihyperError, ValueError, OSError, json.JSONDecodeError) as exc:
        _info(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
