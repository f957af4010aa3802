"""Command-line frontend.

Every run emits one report (JSON by default, CSV with --format csv)
embedding a manifest: subcommand, full parameter record, seed, worker
count, tool version, input/output paths, wall-clock duration.  Re-running
the same manifest reproduces the report byte-for-byte except the duration
field.  Rationals are serialized as exact "num/den" strings.

Exit codes: 0 success; 2 verification-failure results (a false bg-verify,
eq5-verify, or cs-check); 3 budget exhaustion, with partial results
flagged; 1 other errors; 64 usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

from . import __version__
from .budget import resolve_budget
from .census import census, container_params, degree_profile, supersaturation_trend
from .constructions import DeletionConfig, moment_curve, run_deletion_trials
from .additive import bg_check, check_cs, multifold_bound, phi, verify_eq5
from .errors import BudgetExceeded, FormatError, GridposError
from .exact import format_fraction, parse_fraction
from .points import PointSet, dump_points, full_grid, load_points, load_vector_list
from .search import SearchConfig, greedy_general_position, max_general_position_subset, max_grid_set

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY_FAIL = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _add_common(sub):
    sub.add_argument("--out", default=None, help="write the report here instead of stdout")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--threads", type=int, default=1)


def build_parser() -> _Parser:
    parser = _Parser(prog="gridpos", description=__doc__)
    parser.add_argument("--selftest", action="store_true", help="run the invariant suite and exit")
    commands = parser.add_subparsers(dest="command")

    p = commands.add_parser("census", help="count flat-incident tuples of a grid or file")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--infile")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=("pair", "exhaustive", "both"), default="both")
    p.add_argument("--profile", action="store_true", help="also compute the degree profile")
    p.add_argument("--budget", type=int, default=None)
    _add_common(p)

    p = commands.add_parser("degree", help="degree profile of the incidence hypergraph")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--infile")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)
    _add_common(p)

    p = commands.add_parser("delta", help="weighted degree functional at parameter tau")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--infile")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tau", required=True, help="exact rational, e.g. 1/8")
    p.add_argument("--epsilon", default=None, help="exact rational; reported, never asserted")
    p.add_argument("--budget", type=int, default=None)
    _add_common(p)

    p = commands.add_parser("search", help="largest grid subset with no r points on a k-flat")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=None, help="node budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--symmetry", choices=("on", "off"), default="on")
    p.add_argument("--points-out", default=None, help="also write the best set in text format")
    _add_common(p)

    p = commands.add_parser("gp-subset", help="largest general-position subset of a point set")
    p.add_argument("--infile", required=True)
    p.add_argument("--budget", type=int, default=None, help="node budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points-out", default=None)
    _add_common(p)

    p = commands.add_parser("greedy-gp", help="greedy general-position subset with certificate")
    p.add_argument("--infile", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--points-out", default=None)
    _add_common(p)

    p = commands.add_parser("moment-curve", help="power-curve point set over a prime modulus")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="exhaustively check hyperplane freeness")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--points-out", default=None)
    _add_common(p)

    p = commands.add_parser("deletion", help="random sample-then-delete construction")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", default="auto", help='exact rational or "auto"')
    p.add_argument("--c6-mode", choices=("exact", "estimate"), default="estimate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--budget", type=int, default=None)
    _add_common(p)

    p = commands.add_parser("bg-verify", help="only-trivial-solutions check for g-term sums")
    p.add_argument("--infile", required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--side", type=int, default=None, help="grid side for bare integer lists")
    p.add_argument("--budget", type=int, default=None)
    _add_common(p)

    p = commands.add_parser("eq5-verify", help="scaled-difference equation family check")
    p.add_argument("--infile", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--side", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    _add_common(p)

    p = commands.add_parser("phi", help="difference-count table of two sets")
    p.add_argument("--u", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--budget", type=int, default=None)
    _add_common(p)

    p = commands.add_parser("cs-check", help="convolution inequality check for two sets")
    p.add_argument("--u", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--budget", type=int, default=None)
    _add_common(p)

    p = commands.add_parser("trend", help="exhaustive counts across grid sides, with slope")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-list", required=True, help="comma-separated grid sides, e.g. 2,3,4")
    p.add_argument("--budget", type=int, default=None)
    _add_common(p)

    p = commands.add_parser("bounds", help="extremal-size exponent report")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--budget", type=int, default=None, help="accepted for uniformity; no enumeration here")
    _add_common(p)

    return parser


def _load_input(args) -> tuple[PointSet, str | None]:
    if getattr(args, "infile", None):
        ps, warnings = load_points(args.infile, side=getattr(args, "side", None))
        for w in warnings:
            sys.stderr.write(f"warning: {w}\n")
        return ps, args.infile
    if args.d is None or args.n is None:
        raise FormatError("give --infile or both --d and --n")
    return full_grid(args.n, args.d), None


def _point_set_json(ps: PointSet) -> dict:
    return {"d": ps.dim, "n": ps.side, "points": [list(p) for p in ps.points]}


def _fraction_str(x) -> str:
    return format_fraction(Fraction(x))


# ---------------------------------------------------------------- handlers

def _run_census(args):
    V, _ = _load_input(args)
    rep = census(V, args.k, mode=args.mode, budget=args.budget, threads=args.threads)
    profile_json = None
    if args.profile:
        prof = degree_profile(V, args.k, budget=args.budget, threads=args.threads)
        profile_json = {str(size): value for size, value in sorted(prof.delta.items())}
    result = {
        "n": rep.n,
        "d": rep.d,
        "k": rep.k,
        "r": rep.r,
        "colliding_pairs": rep.colliding_pairs,
        "good": rep.good_pairs,
        "bad": rep.bad_pairs,
        "pairwise_lower_bound": rep.pairwise_lower_bound,
        "nondegenerate": rep.nondegenerate_tuples,
        "delta_profile": profile_json,
    }
    columns = [
        ("n", rep.n),
        ("d", rep.d),
        ("k", rep.k),
        ("r", rep.r),
        ("colliding_pairs", rep.colliding_pairs),
        ("good", rep.good_pairs),
        ("bad", rep.bad_pairs),
        ("pairwise_lower_bound", rep.pairwise_lower_bound),
        ("nondegenerate", rep.nondegenerate_tuples),
    ]
    return result, [columns], EXIT_OK


def _run_degree(args):
    V, _ = _load_input(args)
    prof = degree_profile(V, args.k, budget=args.budget, threads=args.threads)
    result = {
        "n": V.side,
        "d": V.dim,
        "k": args.k,
        "num_vertices": len(V),
        "delta_profile": {str(size): value for size, value in sorted(prof.delta.items())},
    }
    rows = [
        [("n", V.side), ("d", V.dim), ("k", args.k), ("l", size), ("delta", value)]
        for size, value in sorted(prof.delta.items())
    ]
    return result, rows, EXIT_OK


def _run_delta(args):
    V, _ = _load_input(args)
    tau = parse_fraction(args.tau)
    epsilon = parse_fraction(args.epsilon) if args.epsilon else None
    params, prof = container_params(
        V, args.k, tau, epsilon=epsilon, budget=args.budget, threads=args.threads
    )
    result = {
        "n": V.side,
        "d": V.dim,
        "k": args.k,
        "num_vertices": params.num_vertices,
        "num_edges": params.num_edges,
        "gamma_surrogate": list(params.gamma_surrogate),
        "tau": _fraction_str(params.tau),
        "delta_h_tau": _fraction_str(params.delta_h_tau),
        "epsilon": None if params.epsilon is None else _fraction_str(params.epsilon),
        "epsilon_threshold": None
        if params.epsilon_threshold is None
        else _fraction_str(params.epsilon_threshold),
        "within_threshold": params.within_threshold,
        "delta_profile": {str(size): value for size, value in sorted(prof.delta.items())},
    }
    row = [
        ("n", V.side),
        ("d", V.dim),
        ("k", args.k),
        ("num_vertices", params.num_vertices),
        ("num_edges", params.num_edges),
        ("tau", _fraction_str(params.tau)),
        ("delta_h_tau", _fraction_str(params.delta_h_tau)),
    ]
    return result, [row], EXIT_OK


def _search_result_json(res, extra: dict) -> dict:
    out = dict(extra)
    out.update(
        {
            "size": len(res.best_set),
            "optimal": res.optimal,
            "nodes": res.nodes,
            "elapsed_ms": res.elapsed_ms,
            "points_text": dump_points(res.best_set),
            "best_set": _point_set_json(res.best_set),
            "partial": not res.optimal,
        }
    )
    return out


def _run_search(args):
    cfg = SearchConfig(
        d=args.d,
        k=args.k,
        r=args.r,
        n=args.n,
        node_budget=resolve_budget(args.budget),
        use_symmetry=args.symmetry == "on",
        seed=args.seed,
    )
    res = max_grid_set(cfg)
    if args.points_out:
        with open(args.points_out, "w", encoding="ascii") as fh:
            fh.write(dump_points(res.best_set))
    result = _search_result_json(
        res, {"d": args.d, "k": args.k, "r": args.r, "n": args.n, "seed": args.seed}
    )
    row = [
        ("d", args.d),
        ("k", args.k),
        ("r", args.r),
        ("n", args.n),
        ("size", len(res.best_set)),
        ("optimal", res.optimal),
        ("nodes", res.nodes),
    ]
    return result, [row], EXIT_OK if res.optimal else EXIT_BUDGET


def _run_gp_subset(args):
    V, _ = _load_input(args)
    res = max_general_position_subset(V, node_budget=resolve_budget(args.budget), seed=args.seed)
    if args.points_out:
        with open(args.points_out, "w", encoding="ascii") as fh:
            fh.write(dump_points(res.best_set))
    result = _search_result_json(res, {"d": V.dim, "n": V.side, "input_size": len(V)})
    row = [
        ("d", V.dim),
        ("n", V.side),
        ("input_size", len(V)),
        ("size", len(res.best_set)),
        ("optimal", res.optimal),
        ("nodes", res.nodes),
    ]
    return result, [row], EXIT_OK if res.optimal else EXIT_BUDGET


def _run_greedy_gp(args):
    V, _ = _load_input(args)
    subset, cert = greedy_general_position(V, V.dim, args.s, seed=args.seed, budget=args.budget)
    if args.points_out:
        with open(args.points_out, "w", encoding="ascii") as fh:
            fh.write(dump_points(subset))
    result = {
        "d": V.dim,
        "s": args.s,
        "subset_size": cert.subset_size,
        "input_size": cert.input_size,
        "certificate_lhs": cert.lhs,
        "certificate_holds": cert.holds,
        "points_text": dump_points(subset),
        "subset": _point_set_json(subset),
    }
    row = [
        ("d", V.dim),
        ("s", args.s),
        ("subset_size", cert.subset_size),
        ("input_size", cert.input_size),
        ("certificate_lhs", cert.lhs),
        ("certificate_holds", cert.holds),
    ]
    return result, [row], EXIT_OK


def _run_moment_curve(args):
    ps = moment_curve(args.d, args.p)
    verified = None
    if args.verify:
        import numpy as np

        from . import kernels

        total = math.comb(len(ps), args.d + 1)
        limit = resolve_budget(args.budget)
        if total > limit:
            raise BudgetExceeded(f"{total} subsets exceed budget {limit}")
        bad = None
        if len(ps) >= args.d + 1:
            bad = kernels.find_low_rank(
                np.array(ps.points, dtype=np.int64), args.d + 1, args.d - 1
            )
        verified = bad is None
    if args.points_out:
        with open(args.points_out, "w", encoding="ascii") as fh:
            fh.write(dump_points(ps))
    result = {
        "d": args.d,
        "p": args.p,
        "size": len(ps),
        "verified": verified,
        "points_text": dump_points(ps),
        "points": _point_set_json(ps),
    }
    row = [("d", args.d), ("p", args.p), ("size", len(ps)), ("verified", verified)]
    code = EXIT_OK if verified in (None, True) else EXIT_VERIFY_FAIL
    return result, [row], code


def _run_deletion(args):
    cfg = DeletionConfig(
        d=args.d,
        r=args.r,
        s=args.s,
        n=args.n,
        p="auto" if args.p == "auto" else parse_fraction(args.p),
        c6_mode=args.c6_mode,
        seed=args.seed,
        trials=args.trials,
        budget=args.budget,
    )
    summary = run_deletion_trials(cfg)
    trials_json = [
        {
            "trial": rep.trial_index,
            "sampled_size": rep.sampled_size,
            "violations_found": rep.violations_found,
            "final_size": rep.final_size,
            "points_text": dump_points(rep.output),
        }
        for rep in summary.reports
    ]
    result = {
        "d": args.d,
        "r": args.r,
        "s": args.s,
        "n": args.n,
        "seed": args.seed,
        "p": _fraction_str(summary.p),
        "c6": _fraction_str(summary.c6),
        "expected_size_bound": _fraction_str(summary.expected_size_bound),
        "mean_sampled": _fraction_str(summary.mean_sampled),
        "mean_final": _fraction_str(summary.mean_final),
        "stderr_final": summary.stderr_final,
        "trials": trials_json,
    }
    rows = [
        [
            ("trial", rep.trial_index),
            ("sampled_size", rep.sampled_size),
            ("violations_found", rep.violations_found),
            ("final_size", rep.final_size),
        ]
        for rep in summary.reports
    ]
    return result, rows, EXIT_OK


def _run_bg_verify(args):
    V, _ = _load_input(args)
    ok, witness = bg_check(V, args.g, args.m, budget=args.budget)
    result = {
        "g": args.g,
        "m": args.m,
        "n": V.side,
        "d": V.dim,
        "holds": ok,
        "witness": None
        if witness is None
        else {
            "coeffs": list(witness.coeffs),
            "values": [list(v) for v in witness.solution.values],
        },
    }
    row = [("g", args.g), ("m", args.m), ("holds", ok)]
    return result, [row], EXIT_OK if ok else EXIT_VERIFY_FAIL


def _run_eq5_verify(args):
    V, _ = _load_input(args)
    ok, witness = verify_eq5(V, args.r, budget=args.budget)
    from .exact import power_floor

    cap = power_floor(V.side, V.dim, 2 * args.r * V.dim + 1)
    result = {
        "r": args.r,
        "n": V.side,
        "d": V.dim,
        "coefficient_cap": cap,
        "holds": ok,
        "witness": None
        if witness is None
        else {
            "c1": witness.c1,
            "c2": witness.c2,
            "values": [list(v) for v in witness.solution.values],
        },
    }
    row = [("r", args.r), ("coefficient_cap", cap), ("holds", ok)]
    return result, [row], EXIT_OK if ok else EXIT_VERIFY_FAIL


def _check_pair_budget(U, T, budget):
    work = len(U) * len(T)
    limit = resolve_budget(budget)
    if work > limit:
        raise BudgetExceeded(f"{work} ordered pairs exceed budget {limit}")


def _run_phi(args):
    U = load_vector_list(args.u)
    T = load_vector_list(args.t)
    _check_pair_budget(U, T, args.budget)
    table = phi(U, T)
    entries = [[list(x), c] for x, c in table.sorted_items()]
    result = {"u_size": len(U), "t_size": len(T), "total": table.total(), "entries": entries}
    rows = [
        [("x", " ".join(str(c) for c in x)), ("count", c)] for x, c in table.sorted_items()
    ]
    return result, rows, EXIT_OK


def _run_cs_check(args):
    U = load_vector_list(args.u)
    T = load_vector_list(args.t)
    _check_pair_budget(U, T, args.budget)
    rep = check_cs(U, T)
    result = {"lhs": _fraction_str(rep.lhs), "rhs": rep.rhs, "holds": rep.holds}
    row = [("lhs", _fraction_str(rep.lhs)), ("rhs", rep.rhs), ("holds", rep.holds)]
    return result, [row], EXIT_OK if rep.holds else EXIT_VERIFY_FAIL


def _run_trend(args):
    n_list = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
    table = supersaturation_trend(args.k, args.d, n_list, budget=args.budget, threads=args.threads)
    result = {
        "k": table.k,
        "d": table.d,
        "rows": [{"n": r.n, "count": r.count} for r in table.rows],
        "slope": table.slope,
    }
    rows = [[("n", r.n), ("count", r.count)] for r in table.rows]
    return result, rows, EXIT_OK


def _run_bounds(args):
    info = multifold_bound(args.d, r=args.r, k=args.k, n=args.n)
    result = {
        "d": info.d,
        "r": info.r,
        "k": info.k,
        "exponent": _fraction_str(info.exponent),
        "exponent_float": info.exponent_float,
        "direct_count_exponent": None
        if info.direct_count_exponent is None
        else _fraction_str(info.direct_count_exponent),
        "modulus_cap": info.modulus_cap,
        "box_side": info.box_side,
    }
    row = [
        ("d", info.d),
        ("r", info.r),
        ("k", info.k),
        ("exponent", _fraction_str(info.exponent)),
        ("exponent_float", info.exponent_float),
    ]
    return result, [row], EXIT_OK


_HANDLERS = {
    "census": _run_census,
    "degree": _run_degree,
    "delta": _run_delta,
    "search": _run_search,
    "gp-subset": _run_gp_subset,
    "greedy-gp": _run_greedy_gp,
    "moment-curve": _run_moment_curve,
    "deletion": _run_deletion,
    "bg-verify": _run_bg_verify,
    "eq5-verify": _run_eq5_verify,
    "phi": _run_phi,
    "cs-check": _run_cs_check,
    "trend": _run_trend,
    "bounds": _run_bounds,
}


def _manifest(args, duration_ms: int) -> dict:
    skip = {"command", "out", "format", "selftest"}
    params = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        if isinstance(value, Fraction):
            value = format_fraction(value)
        params[key.replace("_", "-")] = value
    return {
        "tool": "gridpos",
        "version": __version__,
        "subcommand": args.command,
        "params": params,
        "seed": getattr(args, "seed", 0),
        "threads": getattr(args, "threads", 1),
        "input": getattr(args, "infile", None) or getattr(args, "u", None),
        "output": args.out,
        "duration_ms": duration_ms,
    }


def _emit(args, manifest: dict, result, rows, partial=False, error=None) -> None:
    if args.format == "json":
        report = {"schema": 1, "manifest": manifest, "result": result}
        if partial:
            report["partial"] = True
        if error:
            report["error"] = error
        text = json.dumps(report, indent=2) + "\n"
    else:
        lines = ["# manifest " + json.dumps(manifest, separators=(",", ":"))]
        if partial:
            lines.append("# partial true")
        if error:
            lines.append("# error " + error)
        if rows:
            header = [name for name, _ in rows[0]]
            lines.append(",".join(header))
            for row in rows:
                lines.append(",".join(_csv_cell(v) for _, v in row))
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.selftest:
        from .selftest import run_selftest

        return 0 if run_selftest() else 1
    if not args.command:
        parser.print_usage(sys.stderr)
        sys.stderr.write("error: a subcommand is required (or --selftest)\n")
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        result, rows, code = _HANDLERS[args.command](args)
    except BudgetExceeded as exc:
        duration = int((time.perf_counter() - t0) * 1000)
        _emit(args, _manifest(args, duration), None, [], partial=True, error=str(exc))
        return EXIT_BUDGET
    except (GridposError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    duration = int((time.perf_counter() - t0) * 1000)
    partial = code == EXIT_BUDGET
    _emit(args, _manifest(args, duration), result, rows, partial=partial)
    return code


if __name__ == "__main__":
    sys.exit(main())
