"""Command-line front end.

Subcommands: reduce (rank-one pair to canonical form), check-ec (Gram PSD
check of the trace function), fit-measure (NNLS atomic-measure fit), and
verify (seeded ensemble run).  Exit codes: 0 ok, 1 usage or I/O error,
2 rank check failed, 3 numerical check failed, 4 ill-conditioned fit.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import matrixio
from .convexity import DEFAULT_PSD_TOL, TGrid, check_exponential_convexity
from .errors import (
    DichotomyViolated,
    ExpConvexError,
    IllConditioned,
    MatrixFileError,
    RankNotOne,
)
from .hermitian import validate_hermitian
from .reduction import reduce, reduction_residuals
from .transform import (
    TracePair,
    fit_measure,
    growth_exponents,
    sample_trace_f,
    trace_function,
)
from .verify import run_verification

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RANK = 2
EXIT_CHECK = 3
EXIT_ILL = 4

HOLDOUT_LIMIT = 1e-3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; route through main instead.
    def error(self, message):
        raise _UsageError(message)


def _psd_tol(flag_value: float | None) -> float:
    """PSD tolerance: --tol flag, then EXPCONVEX_TOL env, then the default."""
    if flag_value is not None:
        if flag_value <= 0.0:
            raise _UsageError(f"--tol must be positive, got {flag_value}")
        return flag_value
    env = os.environ.get("EXPCONVEX_TOL")
    if env is not None:
        try:
            val = float(env)
        except ValueError:
            raise _UsageError(f"EXPCONVEX_TOL must be a number, got {env!r}") from None
        if val <= 0.0:
            raise _UsageError(f"EXPCONVEX_TOL must be positive, got {env!r}")
        return val
    return DEFAULT_PSD_TOL


def _load_pair(path: str) -> TracePair:
    a_raw, b_raw = matrixio.load_pair(path)
    return TracePair(validate_hermitian(a_raw), validate_hermitian(b_raw))


def cmd_reduce(args) -> int:
    pair = _load_pair(args.input)
    result = reduce(pair.A, pair.B)
    res = reduction_residuals(pair.A, pair.B, result)
    matrixio.write_doc(args.output, matrixio.reduction_to_doc(result, res))
    print(
        f"reduced {pair.n}x{pair.n} pair: residuals "
        f"{res[0]:.3e} / {res[1]:.3e}; wrote {args.output}"
    )
    return EXIT_OK


def cmd_check_ec(args) -> int:
    if args.grid_n < 2:
        raise _UsageError(f"--grid-n must be at least 2, got {args.grid_n}")
    if not args.grid_lo < args.grid_hi:
        raise _UsageError(
            f"--grid-lo must be below --grid-hi, got [{args.grid_lo}, {args.grid_hi}]"
        )
    tol = _psd_tol(args.tol)
    pair = _load_pair(args.input)
    grid = TGrid.equispaced(args.grid_lo, args.grid_hi, args.grid_n)
    report = check_exponential_convexity(trace_function(pair), grid, tol=tol)
    doc = matrixio.ec_report_to_doc(report, f"trace(n={pair.n})", grid.points)
    sys.stdout.write(matrixio.dumps_doc(doc))
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_fit_measure(args) -> int:
    if args.resolution < 1:
        raise _UsageError(f"--resolution must be positive, got {args.resolution}")
    if args.t_points < 2:
        raise _UsageError(f"--t-points must be at least 2, got {args.t_points}")
    if args.reg < 0.0:
        raise _UsageError(f"--reg must be nonnegative, got {args.reg}")
    pair = _load_pair(args.input)

    est = growth_exponents(pair)
    lo, hi = est.lambda_min_est, est.lambda_max_est
    if hi - lo < 1e-3:
        mid = (lo + hi) / 2.0
        lo, hi = mid - 0.5, mid + 0.5
    samples = sample_trace_f(pair, TGrid.equispaced(-2.0, 2.0, args.t_points))
    fit = fit_measure(samples, (lo, hi), args.resolution, reg=args.reg)
    sys.stdout.write(matrixio.dumps_doc(matrixio.fit_to_doc(fit)))
    return EXIT_OK if fit.holdout_error <= HOLDOUT_LIMIT else EXIT_CHECK


def cmd_verify(args) -> int:
    if args.cases < 1:
        raise _UsageError(f"--cases must be at least 1, got {args.cases}")
    if not 2 <= args.max_n <= 12:
        raise _UsageError(f"--max-n must be between 2 and 12, got {args.max_n}")
    report = run_verification(args.cases, args.max_n, args.seed)
    text = matrixio.dumps_doc(report.to_doc())
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise MatrixFileError(f"{args.out}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(text)
    print(
        f"{report.cases} cases, {len(report.records)} checks, "
        f"{report.failures} failures in {report.elapsed:.2f}s",
        file=sys.stderr,
    )
    return EXIT_OK if report.failures == 0 else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="expconvex", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="reduce a rank-one pair to (diagonal L, nonneg-off-diag M)")
    p.add_argument("input", help="JSON file with matrices A and B")
    p.add_argument("output", help="path for the reduction document")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("check-ec", help="Gram PSD check of the trace function")
    p.add_argument("input", help="JSON file with matrices A and B")
    p.add_argument("--grid-n", type=int, default=8, help="number of grid points (default 8)")
    p.add_argument("--grid-lo", type=float, default=-2.0, help="grid start (default -2)")
    p.add_argument("--grid-hi", type=float, default=2.0, help="grid end (default 2)")
    p.add_argument("--tol", type=float, default=None, help="PSD tolerance (default 1e-8)")
    p.set_defaults(func=cmd_check_ec)

    p = sub.add_parser("fit-measure", help="fit a nonnegative atomic measure to the trace function")
    p.add_argument("input", help="JSON file with matrices A and B")
    p.add_argument("--resolution", type=int, default=64, help="candidate atom count (default 64)")
    p.add_argument("--reg", type=float, default=1e-10, help="ridge regularization (default 1e-10)")
    p.add_argument("--t-points", type=int, default=48, help="trace samples on [-2,2] (default 48)")
    p.set_defaults(func=cmd_fit_measure)

    p = sub.add_parser("verify", help="run the seeded random-ensemble check battery")
    p.add_argument("--cases", type=int, default=50, help="number of random cases (default 50)")
    p.add_argument("--max-n", type=int, default=7, help="largest dimension, 2..12 (default 7)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--out", default=None, help="report path (default: stdout)")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MatrixFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RankNotOne as exc:
        print(f"error: rank check failed: {exc}", file=sys.stderr)
        return EXIT_RANK
    except IllConditioned as exc:
        print(f"error: ill-conditioned: {exc}", file=sys.stderr)
        return EXIT_ILL
    except DichotomyViolated as exc:
        print(f"error: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExpConvexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
