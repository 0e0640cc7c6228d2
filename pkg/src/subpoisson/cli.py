"""Command-line interface.

    subpoisson moment  --poisson MU | --binomial N P | --bernoulli-sum P [P ...]  -k K
    subpoisson bound   KIND -k K --mu MU [-c c -C C] [--cap] [--binomial N P]
    subpoisson verify  SUITE [--out DIR] [--grid lo:hi:count:spacing] ...
    subpoisson sweep   --bounds a,b,... --k 1:20 --mu 1,10 [--exact poisson] [--csv F] [--svg F]

Exit status: 0 success, 1 computation or domain failure, 2 usage error.
The default report directory comes from $SUBPOISSON_OUT_DIR, else ./report.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

import mpmath

from . import bounds
from .bounds import BoundKind
from .exact_moments import BernoulliSum, Binomial, DomainError, Poisson, SizeError, as_fraction
from .precision import DEFAULT_BITS, PrecisionError, fmt
from .verify.report import GridSpec, write_reports
from .verify.suites import SUITES, SuiteConfig, run_suite

OUT_DIR_ENV = "SUBPOISSON_OUT_DIR"

BOUND_CHOICES = {
    "theorem1": [BoundKind.THEOREM1],
    "corollary": [BoundKind.COROLLARY_POLY, BoundKind.COROLLARY_EXP],
    "mgf": [BoundKind.MGF_INTERMEDIATE],
    "latala": [BoundKind.LATALA_LOWER, BoundKind.LATALA_UPPER],
    "berend-tassa": [BoundKind.BEREND_TASSA],
    "poisson-lower": [BoundKind.POISSON_LOWER],
    "binomial-lower": [BoundKind.BINOMIAL_LOWER],
    "bell-power": [BoundKind.BELL_POWER_LOWER],
    "conjecture": [BoundKind.CONJECTURE_LOWER, BoundKind.CONJECTURE_UPPER],
}


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a decimal or rational number: {text!r}") from exc


def _grid(text: str) -> GridSpec:
    try:
        return GridSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _k_values(text: str) -> list:
    """``lo:hi`` or ``lo:hi:step`` integer range, or a comma list of rationals."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise argparse.ArgumentTypeError(f"k range must be lo:hi[:step], got {text!r}")
        lo, hi = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        if lo < 1 or hi < lo or step < 1:
            raise argparse.ArgumentTypeError(f"bad k range {text!r}")
        return list(range(lo, hi + 1, step))
    vals = [_rational(t) for t in text.split(",") if t.strip()]
    return [int(v) if v.denominator == 1 else v for v in vals]


def _mu_values(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subpoisson", description="Moments and moment bounds for sub-Poissonian variables.")
    parser.add_argument("--bits", type=int, default=DEFAULT_BITS, help="working precision in mantissa bits (default 113)")
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("moment", help="exact raw moment E X^k")
    dist = m.add_mutually_exclusive_group(required=True)
    dist.add_argument("--poisson", type=_rational, metavar="MU")
    dist.add_argument("--binomial", nargs=2, metavar=("N", "P"))
    dist.add_argument("--bernoulli-sum", nargs="+", type=_rational, metavar="P")
    m.add_argument("-k", type=int, required=True)
    m.add_argument("--normalized", action="store_true", help="print E (X/mu)^k instead")

    b = sub.add_parser("bound", help="evaluate bounds on E (X/mu)^k")
    b.add_argument("kind", choices=sorted(BOUND_CHOICES) + ["all"])
    b.add_argument("-k", type=_rational, required=True)
    b.add_argument("--mu", type=_rational)
    b.add_argument("-c", type=_rational, dest="c_lower", help="Latala lower constant, 0 < c < 1")
    b.add_argument("-C", type=_rational, dest="c_upper", help="Latala upper constant, C > 1")
    b.add_argument("--cap", action="store_true", help="Berend-Tassa with the Bell-number cap")
    b.add_argument("--binomial", nargs=2, metavar=("N", "P"))
    b.add_argument("--raw", action="store_true", help="also print the bound on E X^k")

    v = sub.add_parser("verify", help="run numeric certification suites")
    v.add_argument("suite", choices=("all",) + SUITES)
    v.add_argument("--out", default=None, help=f"report directory (default ${OUT_DIR_ENV} or ./report)")
    v.add_argument("--grid", type=_grid, help="x grid for g/lambert/logs suites, lo:hi:count[:lin|log]")
    v.add_argument("--gprime-grid", type=_grid)
    v.add_argument("--t-grid", type=_grid, help="t grid for the subpoisson suite")
    v.add_argument("--k-grid", type=_grid, help="k/mu grid for theorem2 and conjecture")
    v.add_argument("--mu-grid", type=_grid, help="mu grid (>= 1) for the conjecture")
    v.add_argument("--mu-max", type=_positive_int, help="largest integer mu for theorem2")
    v.add_argument("--samples", type=_positive_int, help="Monte Carlo sample count")
    v.add_argument("--seed", type=int)
    v.add_argument("--workers", type=_positive_int, default=1)

    s = sub.add_parser("sweep", help="tabulate bounds against exact moments")
    s.add_argument("--bounds", required=True, help="comma list of: " + ", ".join(k.value for k in BoundKind))
    s.add_argument("--k", type=_k_values, required=True, help="lo:hi[:step] or comma list")
    s.add_argument("--mu", type=_mu_values, default=None, help="comma list of means")
    s.add_argument("--exact", choices=("poisson", "binomial"))
    s.add_argument("--binomial", nargs=2, metavar=("N", "P"))
    s.add_argument("-c", type=_rational, dest="c_lower", default=bounds.LATALA_DEFAULT_C_LOWER)
    s.add_argument("-C", type=_rational, dest="c_upper", default=bounds.LATALA_DEFAULT_C_UPPER)
    s.add_argument("--csv", help="CSV output path (default stdout)")
    s.add_argument("--svg", help="SVG plot output path")
    return parser


def _binomial_args(pair) -> tuple[int, Fraction]:
    try:
        n = int(pair[0])
    except ValueError as exc:
        raise UsageError(f"N must be an integer, got {pair[0]!r}") from exc
    try:
        p = as_fraction(pair[1])
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"P must be a decimal or rational, got {pair[1]!r}") from exc
    return n, p


def cmd_moment(args) -> int:
    if args.poisson is not None:
        dist = Poisson(args.poisson)
    elif args.binomial is not None:
        dist = Binomial(*_binomial_args(args.binomial))
    else:
        dist = BernoulliSum(tuple(args.bernoulli_sum))
    if args.k < 0:
        raise DomainError(f"k must be non-negative, got {args.k}")
    value = dist.raw_moment(args.k)
    if args.normalized:
        value = value / dist.mean() ** args.k
    print(value)
    print(fmt(value, 30))
    return 0


def _print_result(res: bounds.BoundResult, k, mu, raw: bool) -> None:
    label = res.kind.value
    if res.log_value is None:
        print(f"{label}\tlog=-inf\tvalue<=0\t(vacuous)")
        return
    value = res.value
    shown = fmt(value, 30) if value is not None else "overflow"
    line = f"{label}\tlog={fmt(res.log_value, 30)}\tvalue={shown}"
    if res.vacuous:
        line += "\t(vacuous)"
    if raw:
        line += f"\traw_log={fmt(bounds.raw_log(res, k, mu), 30)}"
    print(line)


def cmd_bound(args) -> int:
    kinds = [k for v in BOUND_CHOICES.values() for k in v] if args.kind == "all" else BOUND_CHOICES[args.kind]
    binomial = _binomial_args(args.binomial) if args.binomial else None
    mu = args.mu
    if binomial is not None:
        mu = binomial[0] * binomial[1] if mu is None else mu
    if mu is None:
        raise UsageError("--mu is required (or --binomial N P)")
    if args.kind == "latala" and (args.c_lower is None or args.c_upper is None):
        raise UsageError("latala needs both -c and -C; the universal constants are not known numerically")
    if args.kind == "binomial-lower" and binomial is None:
        raise UsageError("binomial-lower needs --binomial N P")
    k = args.k
    k_int = k.denominator == 1
    for kind in kinds:
        if kind in (BoundKind.LATALA_LOWER, BoundKind.LATALA_UPPER):
            if args.c_lower is None or args.c_upper is None:
                continue
            res = bounds.latala_bounds(k, mu, args.c_lower, args.c_upper)[0 if kind is BoundKind.LATALA_LOWER else 1]
        elif kind is BoundKind.BEREND_TASSA:
            if not k_int:
                if args.kind != "all":
                    raise DomainError("berend-tassa needs integer k")
                continue
            res = bounds.berend_tassa_bound(int(k), mu, use_cap=args.cap)
        elif kind is BoundKind.POISSON_LOWER:
            if not k_int:
                if args.kind != "all":
                    raise DomainError("poisson-lower needs integer k")
                continue
            res = bounds.poisson_lower(int(k), mu)
        elif kind is BoundKind.BINOMIAL_LOWER:
            if binomial is None or not k_int:
                if args.kind != "all":
                    raise DomainError("binomial-lower needs integer k")
                continue
            res = bounds.binomial_lower(binomial[0], binomial[1], int(k))
        elif kind is BoundKind.BELL_POWER_LOWER:
            if mu.denominator != 1:
                if args.kind != "all":
                    raise DomainError("bell-power needs an integer mu")
                continue
            res = bounds.bell_power_lower_bound(k, int(mu))
        elif kind in (BoundKind.CONJECTURE_LOWER, BoundKind.CONJECTURE_UPPER) and mu < 1:
            if args.kind != "all":
                res = bounds.conjecture_small_mu_upper(k, mu)
                _print_result(res, k, mu, args.raw)
                return 0
            continue
        else:
            res = bounds.evaluate(kind, k, mu)
        _print_result(res, k, mu, args.raw)
    return 0


def _suite_config(args) -> SuiteConfig:
    cfg = SuiteConfig(bits=args.bits, workers=args.workers)
    if args.grid is not None:
        cfg.x_grid = args.grid
    if args.gprime_grid is not None:
        cfg.gprime_grid = args.gprime_grid
    if args.t_grid is not None:
        cfg.t_grid = args.t_grid
    if args.k_grid is not None:
        cfg.theorem2_ratio_grid = args.k_grid
        cfg.conjecture_ratio_grid = args.k_grid
    if args.mu_grid is not None:
        cfg.conjecture_mu_grid = args.mu_grid
    if args.mu_max is not None:
        cfg.theorem2_mu_max = args.mu_max
    if args.samples is not None:
        cfg.mc_samples = args.samples
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def cmd_verify(args) -> int:
    out = args.out or os.environ.get(OUT_DIR_ENV) or "report"
    reports = run_suite(args.suite, _suite_config(args))
    write_reports(reports, out)
    for r in reports:
        print(r.summary_line())
        violations = r.details.get("violations") if r.report_only else None
        for v in violations or []:
            print(f"    finding: {v}")
    failed = [r.check_name for r in reports if not (r.passed or r.report_only)]
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


def cmd_sweep(args) -> int:
    from .sweep import run_sweep
    from .svg import line_chart

    names = [n.strip() for n in args.bounds.split(",") if n.strip()]
    if not names:
        raise UsageError("--bounds must name at least one bound")
    try:
        kinds = [BoundKind(n) for n in names]
    except ValueError as exc:
        raise UsageError(f"unknown bound in --bounds: {exc}") from exc
    binomial = _binomial_args(args.binomial) if args.binomial else None
    if args.exact == "binomial" and binomial is None:
        raise UsageError("--exact binomial needs --binomial N P")
    mus = args.mu
    if mus is None:
        if binomial is None:
            raise UsageError("--mu is required unless --binomial is given")
        mus = [binomial[0] * binomial[1]]
    report = run_sweep(kinds, args.k, mus, exact=args.exact, binomial=binomial, c=args.c_lower, C=args.c_upper)
    text = report.to_csv()
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        svg = line_chart(report.series(), title="Normalized moment bounds", xlabel="k / mu",
                         ylabel="E (X/mu)^k")
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(svg)
    for row, kind in report.violations:
        print(f"violation: {kind.value} at k={row.k}, mu={row.mu}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.bits < 53:
        parser.error("--bits must be at least 53")
    try:
        with mpmath.workprec(args.bits):
            if args.command == "moment":
                return cmd_moment(args)
            if args.command == "bound":
                return cmd_bound(args)
            if args.command == "verify":
                return cmd_verify(args)
            return cmd_sweep(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DomainError, SizeError, PrecisionError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
