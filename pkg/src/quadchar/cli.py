"""
Command-line front end.

    quadchar predict --X 1e10 --x 1e3 --format json
    quadchar search-max --X 1e4 --x 100
    quadchar verify-polya --X 1e4 --x 100 --output polya.csv
    quadchar verify-lemma22 --n 2 --X-list 1e3,1e4,1e5
    quadchar resonance-bound --X 1e3 --x 50 --window 11,13 --lambda 3 --y 200
    quadchar rmrn --Y 200 --W 15 --window 11,13 --lambda 3

Exit codes: 0 success, 2 usage, 3 data (empty window, degenerate fit), 4 internal.
Errors are written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, InvalidOperation

from .charsums import SearchResult, SearchWindow, search_max
from .errors import DataError
from .discriminant_avg import AverageReport, DEFAULT_EPSILON, average_table
from .polya import PolyaReport, polya_batch
from .report import emit_report
from .resonance import (MomentReport, RmrnReport, build_resonator, predicted_lower_bound,
                        ratio_bound, resonator_for_window, rmrn_lhs)

EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 2, 3, 4


class UsageError(ValueError):
    pass


def integer(text: str) -> int:
    """Integer flag; scientific notation allowed, fractional values rejected."""
    try:
        v = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v.is_finite() or v != v.to_integral_value():
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(v)


def real(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if v != v or v in (float("inf"), float("-inf")):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return v


def cut_parameter(text: str):
    """x is real, but integral values stay ints so they print without a decimal point."""
    v = real(text)
    return int(v) if v.is_integer() else v


def int_list(text: str) -> list[int]:
    return [integer(t) for t in text.split(",") if t.strip()]


def pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}")
    return real(parts[0]), real(parts[1])


def _common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default="-", help="report path ('-' for stdout)")
    p.add_argument("--threads", type=integer, default=None,
                   help="worker threads (default: all cores); reports do not depend on it")


def _resonator_flags(p: argparse.ArgumentParser):
    p.add_argument("--delta", type=real, default=0.1, help="delta in (0, 1/4)")
    p.add_argument("--y", type=real, default=None, help="resonator length override")
    p.add_argument("--window", type=pair, default=None, help="prime window override LO,HI")
    p.add_argument("--lambda", dest="lam", type=real, default=None, help="lambda override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadchar",
        description="Experiments on large sums of real quadratic characters chi_d.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser(
        "search-max",
        help="extremal search: max of sum_{n<=|d|/x} chi_d(n) over X<|d|<=2X",
        description="Exhaustive maximum of sum_{n<=|d|/x} chi_d(n) over fundamental d with "
                    "X < |d| <= 2X, next to the Omega-bound reference line "
                    "sqrt(X/x) exp((sqrt2/2) sqrt(log X/log log X)).")
    p.add_argument("--X", type=integer, required=True)
    p.add_argument("--x", type=cut_parameter, required=True)
    p.add_argument("--abs", action="store_true", help="maximize |sum| instead of the signed sum")
    p.add_argument("--discriminants", type=int_list, default=None,
                   help="explicit comma-separated discriminant set instead of (X, 2X]")
    _common(p)

    p = sub.add_parser(
        "verify-polya",
        help="truncated Polya Fourier expansion against exact prefix sums",
        description="For every fundamental d with X < |d| <= 2X compare sum_{n<=|d|/x} chi_d(n) "
                    "with the Polya expansion tau(chi)/(2 pi i) sum_{1<=|m|<=z} chi(m)/m (1-e(-m/x)), "
                    "z = sqrt(|d| x) log|d|; also reports the cosine sum C_d(z) and sine sum S_d(z).")
    p.add_argument("--X", type=integer, required=True)
    p.add_argument("--x", type=cut_parameter, required=True)
    p.add_argument("--sample", type=integer, default=None, help="random subset size")
    p.add_argument("--seed", type=integer, default=0)
    _common(p)

    p = sub.add_parser(
        "verify-lemma22",
        help="average of chi_d(n) over fundamental discriminants vs its square-indicator main term",
        description="Exact sum_{|d|<=X} chi_d(n) over fundamental d, the main term "
                    "X/zeta(2) prod_{p|n} p/(p+1) [n square], error factors f(n0), g(n1), "
                    "and the fitted exponent of X in the error.")
    p.add_argument("--n", type=integer, required=True)
    p.add_argument("--X-list", dest="X_list", type=int_list, required=True)
    p.add_argument("--epsilon", type=real, default=DEFAULT_EPSILON)
    _common(p)

    p = sub.add_parser(
        "resonance-bound",
        help="resonator moments M1, M2 and the bound max C_d(z)^2 >= M2/M1",
        description="Resonance moments M1 = sum R(d)^2 and M2 = sum R(d)^2 C_d(z)^2 over "
                    "X < |d| <= 2X, their main terms, and the ratio bound for max C_d(z)^2.")
    p.add_argument("--X", type=integer, required=True)
    p.add_argument("--x", type=cut_parameter, required=True)
    p.add_argument("--per-d-z", action="store_true", help="use z = choose_z(d, x) per discriminant")
    _resonator_flags(p)
    _common(p)

    p = sub.add_parser(
        "rmrn",
        help="coprime-pair resonator sum behind the resonance lower bound",
        description="Exact value of sum_{m1,n1<=W coprime} m1 n1 r(m1) r(n1)/max(m1,n1)^3 "
                    "sum_{d<=Y/max, (d,m1 n1)=1} r(d)^2 / prod_p (1+r(p)^2), with the reference "
                    "value exp(2 sqrt(log Y/log log Y)).")
    p.add_argument("--Y", type=real, required=True)
    p.add_argument("--W", type=real, required=True)
    _resonator_flags(p)
    _common(p)

    p = sub.add_parser(
        "predict",
        help="Omega-bound reference value sqrt(X/x) exp((sqrt2/2) sqrt(log X/log log X))",
        description="Closed form of the conditional Omega lower bound for max sum_{n<=|d|/x} "
                    "chi_d(n), with the o(1) term set to zero.")
    p.add_argument("--X", type=real, required=True)
    p.add_argument("--x", type=cut_parameter, required=True)
    _common(p)
    return parser


def _has_overrides(args) -> bool:
    return args.y is not None or args.window is not None or args.lam is not None


def run(args) -> tuple[list[dict], tuple[str, ...]]:
    workers = args.threads
    if workers is not None and workers < 1:
        raise UsageError(f"--threads must be >= 1, got {workers}")
    cmd = args.subcommand
    if cmd == "predict":
        return [{"X": args.X, "x": args.x, "bound": predicted_lower_bound(args.X, args.x)}], ("X", "x", "bound")
    if cmd == "search-max":
        res = search_max(SearchWindow(args.X, args.x), absolute=args.abs, workers=workers,
                         discriminants=args.discriminants)
        return [res.row()], SearchResult.columns
    if cmd == "verify-polya":
        reports = polya_batch(args.X, args.x, workers, sample=args.sample, seed=args.seed)
        return [r.row() for r in reports], PolyaReport.columns
    if cmd == "verify-lemma22":
        rows = average_table(args.n, args.X_list, args.epsilon, workers)
        return [r.row() for r in rows], AverageReport.columns
    if cmd == "resonance-bound":
        if _has_overrides(args):
            y = args.y if args.y is not None else resonator_for_window(args.X, args.x, args.delta).y
            spec = build_resonator(y, args.delta, window=args.window, lam=args.lam)
        else:
            spec = resonator_for_window(args.X, args.x, args.delta)
        rep = ratio_bound(spec, args.X, args.x, per_d_z=args.per_d_z, workers=workers)
        return [rep.row()], MomentReport.columns
    if cmd == "rmrn":
        y = args.Y if args.y is None else args.y
        spec = build_resonator(y, args.delta, window=args.window, lam=args.lam)
        return [rmrn_lhs(spec, args.Y, args.W).row()], RmrnReport.columns
    raise UsageError(f"unknown subcommand {cmd}")


def _fail(code: int, kind: str, exc: BaseException) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": str(exc), "exit_code": code}) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rows, columns = run(args)
        emit_report(rows, columns, args.format, args.output)
    except DataError as exc:
        return _fail(EXIT_DATA, type(exc).__name__, exc)
    except ValueError as exc:
        return _fail(EXIT_USAGE, type(exc).__name__, exc)
    except Exception as exc:  # noqa: BLE001
        return _fail(EXIT_INTERNAL, type(exc).__name__, exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
