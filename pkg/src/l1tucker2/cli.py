"""Command-line interface.

Exit codes: 0 success, 1 validation/config error, 2 capacity error,
3 verification failure.
"""

import argparse
import dataclasses
import json
import logging
import sys

import numpy as np

from . import baselines, harness, io, solvers
from .exceptions import CapacityError, L1Tucker2Error
from .linalg import stack_to_columns
from .verify import run_checks

log = logging.getLogger("l1tucker2")

EXIT_OK, EXIT_INVALID, EXIT_CAPACITY, EXIT_VERIFY = 0, 1, 2, 3

SOLVE_METHODS = ("exhaustive", "polynomial", "auto", "hosvd", "hooi", "glram", "pca", "l1pca", "alt")


def solve_report(stack, method):
    """Dictionary describing the fit of ``method`` on ``stack``."""
    if method in ("pca", "l1pca"):
        Y = stack_to_columns(stack)
        if method == "pca":
            q = baselines.pca_rank1_vectorized(stack)
            obj = float(np.linalg.norm(Y.T @ q))
        else:
            q, obj = baselines.l1pca_rank1_exact(Y)
        return {
            "method": method,
            "objective": obj,
            "q": q.tolist(),
            "b": [1 if x >= 0 else -1 for x in Y.T @ q],
            "candidates_evaluated": 0,
            "certificate": None,
        }
    est = harness.fit(stack, method)
    if not isinstance(est, solvers.Rank1Solution):
        u, v = est
        est = solvers.Rank1Solution(
            u=u,
            v=v,
            b=solvers.sign_pattern(stack, u, v),
            objective=solvers.objective(stack, u, v),
            method=method,
        )
    report = est.as_dict()
    cert = solvers.verify_certificate(stack, est)
    report["certificate"] = {"ok": cert.ok, **cert.residuals}
    return report


def _fmt_vec(x):
    return " ".join(f"{float(t):.17g}" for t in x)


def print_report(report, out=None):
    out = out or sys.stdout
    print(f"method: {report['method']}", file=out)
    print(f"objective: {report['objective']:.17g}", file=out)
    print("b: " + " ".join("+1" if x > 0 else "-1" for x in report["b"]), file=out)
    for key in ("u", "v", "q"):
        if key in report:
            print(f"{key}: {_fmt_vec(report[key])}", file=out)
    print(f"candidates_evaluated: {report['candidates_evaluated']}", file=out)
    if report.get("fallback"):
        print("fallback: exhaustive (W not in general position)", file=out)
    cert = report["certificate"]
    if cert is not None:
        print(
            "certificate: {} (l1={:.3e} bilinear={:.3e} sigma={:.3e} signs={})".format(
                "ok" if cert["ok"] else "FAILED", cert["l1"], cert["bilinear"], cert["sigma"], cert["signs"]
            ),
            file=out,
        )


def cmd_solve(args):
    stack = io.read_stack(args.input)
    report = solve_report(stack, args.method)
    if args.json:
        json.dump(report, sys.stdout, indent=2)
        print()
    else:
        print_report(report)
    return EXIT_OK


def cmd_gen(args):
    config = harness.ExperimentConfig(
        D=args.d,
        M=args.m,
        N=args.n,
        signal_variance=args.signal_var,
        noise_variance=args.noise_var,
        seed=args.seed,
        corrupt_entries=0,
        corrupt_matrices=0,
    )
    clean, noisy = harness.generate_dataset(config, args.realization)
    io.write_stack(args.out, noisy)
    io.write_stack(f"{args.out}.clean", clean)
    log.info("wrote %s and %s.clean", args.out, args.out)
    return EXIT_OK


def cmd_corrupt(args):
    stack = io.read_stack(args.input)
    N, D, M = stack.shape
    config = harness.ExperimentConfig(
        D=D,
        M=M,
        N=N,
        corrupt_entries=args.entries,
        corrupt_matrices=args.matrices,
        seed=args.seed,
    )
    io.write_stack(args.out, harness.corrupt(stack, config, args.realization, args.db))
    return EXIT_OK


def cmd_sweep(args):
    config = io.read_config(args.config, harness.ExperimentConfig)
    if args.full:
        config = dataclasses.replace(config, realizations=1000)

    def progress(done, total):
        if done % 10 == 0 or done == total:
            log.info("realization %d/%d", done, total)

    records = harness.run_sweep(config, workers=args.workers, progress=progress)
    io.write_sweep_csv(args.out, records)
    if args.gnuplot:
        with open(args.gnuplot, "w") as fh:
            fh.write(io.gnuplot_script(args.out, config.methods))
    return EXIT_OK


def cmd_verify(args):
    results = run_checks(trials=args.trials, seed=args.seed)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def build_parser():
    parser = argparse.ArgumentParser(prog="l1tucker2", description="Exact rank-1 L1-norm TUCKER2 decomposition.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decompose a stack file")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=SOLVE_METHODS, default="auto")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate a rank-1 plus noise stack")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--signal-var", type=float, default=49.0)
    p.add_argument("--noise-var", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--realization", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("corrupt", help="add sparse outliers to a stack file")
    p.add_argument("--input", required=True)
    p.add_argument("--entries", type=int, required=True)
    p.add_argument("--matrices", type=int, required=True)
    p.add_argument("--db", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--realization", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("sweep", help="reconstruction-MSE sweep over corruption levels")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--full", action="store_true", help="use 1000 realizations")
    p.add_argument("--gnuplot", help="also write a gnuplot script to this path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the solver self-checks")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (L1Tucker2Error, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
