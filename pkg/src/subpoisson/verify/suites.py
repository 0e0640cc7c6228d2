"""Named verification suites with their default grids.

A check that fails at the requested precision is rerun once at four times
the precision; the rerun's report is kept and marked ``retried``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath

from ..exact_moments import BernoulliSum, Binomial, Poisson, normalized_moment
from ..precision import DEFAULT_BITS, to_hifloat, workprec
from . import checks
from .montecarlo import RNG_ALGORITHM, monte_carlo_moment
from .report import CheckReport, GridSpec

SUITES = ("g", "lambert", "logs", "mgf", "subpoisson", "counterexample", "theorem2", "conjecture", "montecarlo")

POISSON_MEANS = (Fraction(1, 10), Fraction(1, 2), Fraction(1), Fraction(5), Fraction(10), Fraction(100))
BINOMIAL_NS = (5, 20, 100)
BINOMIAL_PS = (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10))
COUNTEREXAMPLE_MEANS = (Fraction(1, 2), Fraction(1), Fraction(2))


@dataclass
class SuiteConfig:
    x_grid: GridSpec = field(default_factory=lambda: GridSpec("1e-6", "1e6", 10_000, "log"))
    gprime_grid: GridSpec = field(default_factory=lambda: GridSpec("1e-3", "1e3", 10_000, "log"))
    t_grid: GridSpec = field(default_factory=lambda: GridSpec("0.005", "5", 1000, "lin"))
    counterexample_points: int = 1000
    theorem2_mu_max: int = 10
    theorem2_ratio_grid: GridSpec = field(default_factory=lambda: GridSpec("1", "30", 30, "lin"))
    conjecture_ratio_grid: GridSpec = field(default_factory=lambda: GridSpec("0.1", "40", 50, "log"))
    conjecture_mu_grid: GridSpec = field(default_factory=lambda: GridSpec("1", "10", 21, "lin"))
    conjecture_small_mu_grid: GridSpec | None = field(default_factory=lambda: GridSpec("0.1", "1", 10, "lin"))
    bernoulli_instances: int = 20
    mc_samples: int = 1_000_000
    seed: int = 20240607
    bits: int = DEFAULT_BITS
    workers: int = 1


def criterion3_cases() -> list:
    cases = [(Poisson(mu), k) for mu in POISSON_MEANS for k in range(1, 51)]
    cases += [(Binomial(n, p), k) for n in BINOMIAL_NS for p in BINOMIAL_PS for k in range(1, min(n, 30) + 1)]
    return cases


def random_bernoulli_sums(count: int, seed: int, max_len: int = 20) -> list[BernoulliSum]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, max_len)
        out.append(BernoulliSum(tuple(Fraction(rng.randint(1, 1000), 1000) for _ in range(n))))
    return out


def subpoisson_dists(cfg: SuiteConfig) -> list:
    dists = [Poisson(1), Poisson(Fraction(37, 10))]
    dists += [Binomial(n, p) for n in (1, 10, 100) for p in (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10), Fraction(1))]
    dists += random_bernoulli_sums(cfg.bernoulli_instances, cfg.seed)
    return dists


def counterexample_grid(mu: Fraction, points: int) -> GridSpec:
    # stays inside (0, log(1 + 1/mu)) at 0.999 of the pole
    with workprec(DEFAULT_BITS):
        hi = mpmath.log1p(1 / to_hifloat(mu)) * mpmath.mpf("0.999")
    return GridSpec("1e-3", mpmath.nstr(hi, 12, strip_zeros=True), points, "log")


def montecarlo_report(cfg: SuiteConfig) -> CheckReport:
    cases = [(Binomial(100, Fraction(3, 10)), 3, cfg.mc_samples), (Poisson(1), 4, max(1000, cfg.mc_samples // 10))]
    rows = []
    margins = []
    for dist, k, n in cases:
        est = monte_carlo_moment(dist, k, n, cfg.seed, cfg.workers)
        exact = normalized_moment(dist, k)
        z = abs(est.estimate - float(exact))
        margin = 3 * est.std_error - z
        rows.append([est.distribution, k, n, cfg.seed, est.workers, exact, est.estimate, est.std_error,
                     est.ci99_half_width, margin])
        margins.append((margin, {"dist": est.distribution, "k": k}))
    m, pt = min(margins, key=lambda t: t[0])
    return CheckReport(
        check_name="montecarlo",
        grid={"cases": [r[0] for r in rows], "seed": cfg.seed, "workers": cfg.workers},
        tolerance=0,
        worst_margin=m,
        worst_point=pt,
        passed=m >= 0,
        bits=cfg.bits,
        columns=["dist", "k", "samples", "seed", "workers", "exact", "estimate", "std_error", "ci99_half_width",
                 "margin_3se"],
        rows=rows,
        details={"margin": "3 standard errors minus |estimate - exact|", "rng": RNG_ALGORITHM},
    )


def _suite_runners(cfg: SuiteConfig) -> dict[str, list[Callable[[], CheckReport]]]:
    w = cfg.workers
    return {
        "g": [
            lambda: checks.check_g_nonpositive(cfg.x_grid, workers=w),
            lambda: checks.check_mgf_vs_closed_form(cfg.x_grid, workers=w),
            lambda: checks.check_gprime_form(cfg.gprime_grid, workers=w),
        ],
        "lambert": [
            lambda: checks.check_hoorfar_hassani(cfg.x_grid, workers=w),
            lambda: checks.check_lambert_quadratic(cfg.x_grid, workers=w),
        ],
        "logs": [lambda: checks.check_log_sandwich(cfg.x_grid, workers=w)],
        "mgf": [
            lambda: _merge_chain(criterion3_cases()),
            lambda: checks.check_proof_chain(criterion3_cases()),
        ],
        "subpoisson": [lambda: _merge_reports(
            "subpoissonian_mgf",
            [checks.check_subpoissonian_mgf(d, cfg.t_grid) for d in subpoisson_dists(cfg)],
            "dist",
        )],
        "counterexample": [lambda: _merge_reports(
            "exponential_counterexample",
            [checks.check_exponential_counterexample(mu, counterexample_grid(mu, cfg.counterexample_points))
             for mu in COUNTEREXAMPLE_MEANS],
            "mu",
        )],
        "theorem2": [lambda: checks.check_theorem2(cfg.theorem2_mu_max, cfg.theorem2_ratio_grid, workers=w)],
        "conjecture": [lambda: _conjecture(cfg)],
        "montecarlo": [lambda: montecarlo_report(cfg)],
    }


def _merge_chain(cases) -> CheckReport:
    by_dist: dict = {}
    for dist, k in cases:
        by_dist.setdefault(dist, []).append(k)
    parts = [checks.check_mgf_bound_chain(d, ks) for d, ks in by_dist.items()]
    return _merge_reports("mgf_bound_chain", parts, None)


def _merge_reports(name: str, parts: list[CheckReport], label: str | None) -> CheckReport:
    """Concatenate per-distribution reports; the worst margin is taken over all parts."""
    columns = ([label] if label else []) + parts[0].columns
    rows = []
    for part in parts:
        tag = part.details.get("dist") if label == "dist" else part.grid.get("mu") if label == "mu" else None
        for r in part.rows:
            rows.append(([tag] if label else []) + r)
    worst_part = min(parts, key=lambda r: r.worst_margin)
    return CheckReport(
        check_name=name,
        grid={"parts": [p.grid for p in parts]},
        tolerance=worst_part.tolerance,
        worst_margin=worst_part.worst_margin,
        worst_point=worst_part.worst_point,
        passed=all(p.passed for p in parts),
        columns=columns,
        rows=rows,
        details={"margin": parts[0].details.get("margin"), "parts": len(parts)},
    )


def _conjecture(cfg: SuiteConfig) -> CheckReport:
    main = checks.conjecture_sweep(cfg.conjecture_ratio_grid, cfg.conjecture_mu_grid, workers=cfg.workers)
    if cfg.conjecture_small_mu_grid is None:
        return main
    small = checks.conjecture_sweep(cfg.conjecture_ratio_grid, cfg.conjecture_small_mu_grid,
                                    workers=cfg.workers, locate_crossing=False)
    main.rows.extend(small.rows)
    main.details["small_mu_region"] = {
        "grid": small.grid,
        "worst_small_mu_upper": small.details["worst_small_mu_upper"],
        "violations": small.details["violations"],
    }
    main.details["violations"] = main.details["violations"] + small.details["violations"]
    main.passed = not main.details["violations"]
    if small.worst_margin < main.worst_margin:
        main.worst_margin, main.worst_point = small.worst_margin, small.worst_point
    return main


def run_check(runner: Callable[[], CheckReport], bits: int) -> CheckReport:
    with workprec(bits):
        report = runner()
    report.bits = bits
    if not report.passed:
        with workprec(4 * bits):
            retry = runner()
        retry.bits = 4 * bits
        retry.retried = True
        retry.details["first_attempt"] = {"bits": bits, "worst_margin": report.worst_margin}
        report = retry
    return report


def run_suite(name: str, cfg: SuiteConfig | None = None) -> list[CheckReport]:
    cfg = cfg or SuiteConfig()
    runners = _suite_runners(cfg)
    names = SUITES if name == "all" else (name,)
    for n in names:
        if n not in runners:
            raise KeyError(f"unknown suite {n!r}; choose from all, {', '.join(SUITES)}")
    return [run_check(r, cfg.bits) for n in names for r in runners[n]]
