"""Command-line interface.

Exit codes: 0 success, 1 invalid configuration, 2 a requested acceptance
threshold failed (for CI use).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds, experiments
from .analytics import ModelParams, predictions
from .fourier import TinyModel, moment_bruteforce, parseval_gap, verify_star_basis
from .graphs import Coloring, DenseGraph, GraphSpec, run_dynamics, sample_dense
from .numerics import diff_distribution

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_THRESHOLD = 2


def _emit(obj, out_path=None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    print(text)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")


def _add_common(sp, trials_default=1000, seed_default=0):
    sp.add_argument("--config", help="JSON file with defaults for this command")
    sp.add_argument("--seed", type=int, default=None, help="master seed (u64)")
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--out", default=None, help="write the record to this path")
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(_trials_default=trials_default, _seed_default=seed_default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="majlab")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("diff-dist", help="exact pmf of Bin(n,p) - Bin(m,p)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("solve-alpha", help="sup-condition feasibility / minimal alpha")
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("sample-dynamics", help="one trajectory of majority dynamics")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--r0", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-steps", type=int, default=64)
    rep = sp.add_mutually_exclusive_group()
    rep.add_argument("--dense", action="store_true", default=True)
    rep.add_argument("--implicit", dest="dense", action="store_false")
    sp.add_argument("--edges-out", default=None, help="write the edge list here")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("verify-fourier", help="brute-force Fourier checks at tiny n")
    sp.add_argument("--r0", type=int, required=True)
    sp.add_argument("--b0", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--k", type=int, default=4, help="max moment order to tabulate")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("clt-experiment", help="distribution of |R_1| vs predictions")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--r0", type=int, default=None)
    sp.add_argument("--check-variance-band", nargs=2, type=float, default=None,
                    metavar=("LO", "HI"))
    sp.add_argument("--check-ks", type=float, default=None, metavar="MAX")
    _add_common(sp, trials_default=10_000)

    sp = sub.add_parser("fixation-experiment", help="coupled fixation advantage")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--delta", type=int, default=None)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--max-steps", type=int, default=64)
    sp.add_argument("--check-min-z", type=float, default=None)
    _add_common(sp, trials_default=2000)

    sp = sub.add_parser("prop-experiment", help="opposing-majority count for fixed R")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--delta-frac", type=float, default=None)
    sp.add_argument("--max-failures", type=int, default=None)
    _add_common(sp, trials_default=100)

    sp = sub.add_parser("swing-experiment", help="|T_R u T_B| vs prediction")
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--x", type=int, default=None)
    sp.add_argument("--p", type=float, default=None)
    _add_common(sp, trials_default=2000)

    sp = sub.add_parser("conjecture-scan", help="step-1 leader monotonicity scan")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--r0", type=int, default=None)
    sp.add_argument("--max-steps", type=int, default=64)
    _add_common(sp, trials_default=1000)

    sp = sub.add_parser("step-experiment", help="steps to unanimity, random coloring")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--p", type=float, default=None)
    sp.add_argument("--max-steps", type=int, default=64)
    sp.add_argument("--check-min-within-4", type=float, default=None)
    _add_common(sp, trials_default=200)
    return parser


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        with open(cfg_path) as fh:
            cfg = json.load(fh)
        for key, value in cfg.items():
            attr = key.replace("-", "_")
            if getattr(args, attr, None) is None:
                setattr(args, attr, value)
    if getattr(args, "trials", None) is None:
        args.trials = getattr(args, "_trials_default", None)
    if getattr(args, "seed", None) is None:
        args.seed = getattr(args, "_seed_default", 0)
    return args


def _require(args, *names) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ValueError(f"missing required option(s): {', '.join(missing)}")


def _finish_record(record, args, checks=()) -> int:
    if args.out:
        record.write(args.out)
    print(record.to_json())
    for ok, message in checks:
        if not ok:
            print(f"THRESHOLD FAILED: {message}", file=sys.stderr)
            return EXIT_THRESHOLD
    return EXIT_OK


def _cmd_diff_dist(args) -> int:
    dist = diff_distribution(args.n, args.m, args.p)
    _emit(dist.to_dict(), args.out)
    return EXIT_OK


def _cmd_solve_alpha(args) -> int:
    result: dict = {"delta": args.delta, "eps": args.eps}
    if args.alpha is not None:
        sup = bounds.sup_over_gamma(args.alpha, args.delta)
        result.update(
            {
                "alpha": args.alpha,
                "sup_value": sup.sup_value,
                "gamma_argmax": sup.gamma_argmax,
                "feasible": sup.sup_value <= 0.25 - args.eps,
            }
        )
    else:
        alpha_star = bounds.min_alpha(args.delta, args.eps)
        sup = bounds.sup_over_gamma(alpha_star, args.delta)
        result.update(
            {
                "alpha_star": alpha_star,
                "sup_value": sup.sup_value,
                "gamma_argmax": sup.gamma_argmax,
            }
        )
    _emit(result, args.out)
    return EXIT_OK


def _cmd_sample_dynamics(args) -> int:
    spec = GraphSpec(
        n=args.n,
        p=args.p,
        seed=args.seed,
        representation="dense" if args.dense else "implicit",
    )
    coloring = Coloring.canonical(args.n, args.r0)
    if args.dense:
        graph = sample_dense(spec)
        traj = run_dynamics(graph, coloring, args.max_steps)
        if args.edges_out:
            with open(args.edges_out, "w") as fh:
                for u, v in graph.edges():
                    fh.write(f"{u} {v}\n")
    else:
        traj = run_dynamics(spec, coloring, args.max_steps)
    _emit(
        {
            "spec": {"n": args.n, "p": args.p, "seed": args.seed},
            "steps": [
                {"step": i, "red_count": c} for i, c in enumerate(traj.red_counts)
            ],
            "outcome": traj.outcome.value,
            "steps_to_outcome": traj.steps_to_outcome,
        },
        args.out,
    )
    return EXIT_OK


def _cmd_verify_fourier(args) -> int:
    model = TinyModel(args.r0, args.b0, args.p)
    report = verify_star_basis(model)
    moments = [moment_bruteforce(model, k).__dict__ for k in range(1, args.k + 1)]
    parseval = {v: parseval_gap(model, v) for v in range(model.n)}
    _emit(
        {
            "model": {"r0": args.r0, "b0": args.b0, "p": args.p},
            "basis_checks": {
                "sq_moment_gap": report.sq_moment_gap,
                "empty_coeff_gap": report.empty_coeff_gap,
                "off_star_gap": report.off_star_gap,
                "off_star_sets_checked": report.off_star_sets_checked,
                "power_bound_ok": report.power_bound_ok,
                "pair_sum_reduction_gap": report.pair_sum_reduction_gap,
                "single_edge_magnitudes": report.single_edge_magnitudes,
                "pair_magnitudes": report.pair_magnitudes,
            },
            "parseval_gaps": parseval,
            "moments": moments,
        },
        args.out,
    )
    return EXIT_OK


def _cmd_clt(args) -> int:
    _require(args, "n", "p", "r0")
    record = experiments.run_clt_experiment(
        args.n, args.p, args.r0, args.trials, args.seed, workers=args.workers
    )
    checks = []
    if args.check_variance_band:
        lo, hi = args.check_variance_band
        ratio = record.extras.get("variance_ratio")
        checks.append(
            (ratio is not None and lo <= ratio <= hi, f"variance ratio {ratio}")
        )
    if args.check_ks is not None:
        ks = record.summary.ks_statistic
        checks.append((ks is not None and ks <= args.check_ks, f"KS {ks}"))
    return _finish_record(record, args, checks)


def _cmd_fixation(args) -> int:
    _require(args, "n", "delta", "p")
    record = experiments.run_fixation_experiment(
        args.n, args.delta, args.p, args.trials, args.seed, max_steps=args.max_steps
    )
    checks = []
    if args.check_min_z is not None:
        z = record.extras["advantage_z"]
        checks.append((z >= args.check_min_z, f"advantage z-score {z}"))
    return _finish_record(record, args, checks)


def _cmd_prop(args) -> int:
    _require(args, "n", "p", "alpha", "delta_frac")
    record = experiments.run_proposition_experiment(
        args.n,
        args.p,
        args.alpha,
        args.delta_frac,
        args.trials,
        args.seed,
        workers=args.workers,
    )
    checks = []
    if args.max_failures is not None:
        f = record.extras["failures"]
        checks.append((f <= args.max_failures, f"{f} failing trials"))
    return _finish_record(record, args, checks)


def _cmd_swing(args) -> int:
    _require(args, "m", "x", "p")
    record = experiments.run_swing_experiment(
        args.m, args.x, args.p, args.trials, args.seed, workers=args.workers
    )
    return _finish_record(record, args)


def _cmd_conjecture(args) -> int:
    _require(args, "n", "p", "r0")
    record = experiments.run_conjecture_scan(
        args.n, args.p, args.r0, args.trials, args.seed, max_steps=args.max_steps
    )
    return _finish_record(record, args)


def _cmd_steps(args) -> int:
    _require(args, "n", "p")
    record = experiments.run_step_experiment(
        args.n, args.p, args.trials, args.seed, max_steps=args.max_steps
    )
    checks = []
    if args.check_min_within_4 is not None:
        freq = record.extras["winner_within_4_frequency"]
        checks.append((freq >= args.check_min_within_4, f"within-4 frequency {freq}"))
    return _finish_record(record, args, checks)


_COMMANDS = {
    "diff-dist": _cmd_diff_dist,
    "solve-alpha": _cmd_solve_alpha,
    "sample-dynamics": _cmd_sample_dynamics,
    "verify-fourier": _cmd_verify_fourier,
    "clt-experiment": _cmd_clt,
    "fixation-experiment": _cmd_fixation,
    "prop-experiment": _cmd_prop,
    "swing-experiment": _cmd_swing,
    "conjecture-scan": _cmd_conjecture,
    "step-experiment": _cmd_steps,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args)
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
