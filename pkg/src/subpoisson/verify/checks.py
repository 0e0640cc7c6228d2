"""Numeric checks of each inequality used in the moment-bound proofs.

Every check evaluates a margin ``RHS - LHS`` (relative, or as a log ratio,
as stated per check) at each grid point and passes when the smallest margin
is at least ``-tolerance``.  Failures are reported, never raised.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .. import bounds
from ..bell_real import bell_dobinski, log_bell_power_lower, touchard_dobinski
from ..exact_moments import BernoulliSum, Binomial, DomainError, Distribution, Poisson, poisson_raw_moment
from ..exact_moments import describe as describe_dist
from ..lambert_w import hoorfar_hassani_upper, lambert_w0
from ..precision import log_fraction, to_hifloat, workprec
from .report import CheckReport, GridSpec, grid_map, worst

G_TOL = mpmath.mpf("1e-10")
REL_TOL = mpmath.mpf("1e-12")
GPRIME_TOL = mpmath.mpf("1e-5")
CHAIN_TOL = mpmath.mpf("1e-10")
THEOREM2_SLACK = mpmath.mpf("1e-9")


def _grid_desc(**axes) -> dict:
    return {name: (g.describe() if isinstance(g, GridSpec) else g) for name, g in axes.items()}


def _rel(rhs, lhs):
    return (rhs - lhs) / abs(rhs)


# -- the g function --------------------------------------------------------


def g_function(x) -> mpmath.mpf:
    """1/W(x) + W(x) - 1 - 1/x - log x + log log(1 + x)."""
    x = to_hifloat(x)
    w = lambert_w0(x).w
    return 1 / w + w - 1 - 1 / x - mpmath.log(x) + mpmath.log(mpmath.log1p(x))


def g_prime_closed(x) -> mpmath.mpf:
    """(1 - e^{W(x)}) / x^2 + 1 / ((1 + x) log(1 + x))."""
    x = to_hifloat(x)
    return (1 - lambert_w0(x).exp_w) / x**2 + 1 / ((1 + x) * mpmath.log1p(x))


def check_g_nonpositive(grid: GridSpec, tol=G_TOL, workers: int = 1) -> CheckReport:
    """g <= tol at every point and g(x_{i+1}) <= g(x_i) + tol pairwise."""
    xs = grid.points()
    gs = grid_map(g_function, xs, workers)
    rows = []
    margins = []
    for i, (x, g) in enumerate(zip(xs, gs)):
        mono = gs[i - 1] - g if i else None
        rows.append([x, g, -g, mono])
        margins.append((-g, {"x": x, "kind": "g<=0"}))
        if mono is not None:
            margins.append((mono, {"x": x, "x_prev": xs[i - 1], "kind": "non-increasing"}))
    m, pt = worst(margins)
    return CheckReport(
        check_name="g_nonpositive",
        grid=_grid_desc(x=grid),
        tolerance=tol,
        worst_margin=m,
        worst_point=pt,
        passed=m >= -tol,
        columns=["x", "g", "margin_nonpositive", "margin_monotone"],
        rows=rows,
        details={"margin": "absolute", "g_at_min_x": gs[0], "max_g": max(gs)},
    )


def _mgf_vs_closed_form_point(x):
    # exp(f(x)) <= x / log(1+x), as a log ratio
    lhs = bounds.mgf_exponent(x)
    rhs = mpmath.log(x) - mpmath.log(mpmath.log1p(x))
    return lhs, rhs


def check_mgf_vs_closed_form(grid: GridSpec, tol=G_TOL, workers: int = 1) -> CheckReport:
    """1/W(x) + W(x) - 1 - 1/x <= log x - log log(1+x), evaluated directly."""
    xs = grid.points()
    vals = grid_map(_mgf_vs_closed_form_point, xs, workers)
    rows = [[x, lhs, rhs, rhs - lhs] for x, (lhs, rhs) in zip(xs, vals)]
    m, pt = worst((r[3], {"x": r[0]}) for r in rows)
    return CheckReport(
        check_name="mgf_vs_closed_form",
        grid=_grid_desc(x=grid),
        tolerance=tol,
        worst_margin=m,
        worst_point=pt,
        passed=m >= -tol,
        columns=["x", "lhs_f", "rhs_log_ratio", "margin"],
        rows=rows,
        details={"margin": "absolute difference of logs"},
    )


def _gprime_point(x):
    bits = mpmath.mp.prec
    with workprec(2 * bits):
        x = to_hifloat(x)
        h = x * mpmath.mpf("1e-6")
        fd = (g_function(x + h) - g_function(x - h)) / (2 * h)
        closed = g_prime_closed(x)
    return fd, closed


def check_gprime_form(grid: GridSpec, tol=GPRIME_TOL, workers: int = 1) -> CheckReport:
    """Central difference of g (step x*1e-6, doubled precision) vs the closed form."""
    xs = grid.points()
    vals = grid_map(_gprime_point, xs, workers)
    rows = []
    for x, (fd, closed) in zip(xs, vals):
        rel_err = abs(fd - closed) / abs(closed)
        rows.append([x, fd, closed, rel_err, tol - rel_err])
    m, pt = worst((r[4], {"x": r[0], "rel_err": r[3]}) for r in rows)
    return CheckReport(
        check_name="gprime_form",
        grid=_grid_desc(x=grid),
        tolerance=0,
        worst_margin=m,
        worst_point=pt,
        passed=m >= 0,
        columns=["x", "finite_difference", "closed_form", "rel_err", "margin"],
        rows=rows,
        details={"margin": f"{mpmath.nstr(tol, 3)} - relative error", "step": "x*1e-6"},
    )


# -- Lambert-W inequalities ------------------------------------------------


def _lambert_point(x):
    x = to_hifloat(x)
    wv = lambert_w0(x)
    ew = wv.exp_w
    z = mpmath.log1p(x)
    proof_ub = x**2 / ((1 + x) * z) + 1
    hh_y1 = hoorfar_hassani_upper(x, 1)
    hh_y1x = hoorfar_hassani_upper(x, 1 + x)
    hh_eq = hoorfar_hassani_upper(x, ew)
    return ew, proof_ub, hh_y1, hh_y1x, hh_eq


def lambert_inequality_rows(xs: Sequence, workers: int = 1) -> list[list]:
    """Per point: e^W, the proof's needed bound, Hoorfar-Hassani at y = 1, 1+x, e^W, and margins."""
    rows = []
    for x, (ew, proof_ub, hh1, hh1x, hheq) in zip(xs, grid_map(_lambert_point, xs, workers)):
        rows.append([
            x, ew, proof_ub, hh1, hh1x, hheq,
            _rel(proof_ub, ew),      # claimed: e^W <= x^2/((1+x)z) + 1
            _rel(hh1x, ew),          # e^W <= (2x+1)/(1+z)
            _rel(proof_ub, hh1x),    # quadratic-in-z step: (2x+1)/(1+z) <= x^2/((1+x)z) + 1
            _rel(hh1, ew),           # Hoorfar-Hassani, y = 1
            abs(hheq - ew) / ew,     # equality case
            _rel(ew, proof_ub),      # reversed: e^W >= x^2/((1+x)z) + 1, what g' <= 0 needs
        ])
    return rows


LAMBERT_COLUMNS = [
    "x", "exp_w", "proof_bound", "hh_y1", "hh_y1px", "hh_y_expw",
    "margin_proof_bound", "margin_hh_y1px", "margin_quadratic_step", "margin_hh_y1",
    "equality_rel_err", "margin_reversed",
]


def check_lambert_quadratic(grid: GridSpec, tol=REL_TOL, workers: int = 1) -> CheckReport:
    """The two upper bounds on e^{W(x)} used by the proof, and the step joining them.

    Checked as written:
      e^{W(x)} <= x^2/((1+x) log(1+x)) + 1
      e^{W(x)} <= (2x+1)/(1+log(1+x))
      (2x+1)/(1+z) <= x^2/((1+x) z) + 1  at z = log(1+x)
    The reversed form of the first line is reported alongside, since the sign
    of g' is governed by e^{W(x)} >= x^2/((1+x) log(1+x)) + 1.
    """
    xs = grid.points()
    rows = lambert_inequality_rows(xs, workers)
    names = {6: "proof_bound", 7: "hoorfar_y=1+x", 8: "quadratic_step"}
    sub = {}
    for col, name in names.items():
        m, pt = worst((r[col], {"x": r[0]}) for r in rows)
        sub[name] = {"worst_margin": m, "worst_point": pt, "passed": m >= -tol,
                     "violations": sum(1 for r in rows if r[col] < -tol)}
    rev_m, rev_pt = worst((r[11], {"x": r[0]}) for r in rows)
    sub["reversed_proof_bound"] = {"worst_margin": rev_m, "worst_point": rev_pt, "passed": rev_m >= -tol,
                                   "note": "not claimed as written; the direction g' <= 0 requires"}
    m, pt = worst((sub[n]["worst_margin"], {**sub[n]["worst_point"], "inequality": n}) for n in names.values())
    return CheckReport(
        check_name="lambert_quadratic",
        grid=_grid_desc(x=grid),
        tolerance=tol,
        worst_margin=m,
        worst_point=pt,
        passed=m >= -tol,
        columns=LAMBERT_COLUMNS,
        rows=rows,
        details={"margin": "relative", "subchecks": sub},
    )


def check_hoorfar_hassani(grid: GridSpec, tol=REL_TOL, workers: int = 1) -> CheckReport:
    """e^{W(x)} <= (x+y)/(1+log y) for y in {1, 1+x}, equality at y = e^{W(x)}."""
    xs = grid.points()
    rows = lambert_inequality_rows(xs, workers)
    margins = []
    for r in rows:
        margins.append((r[9], {"x": r[0], "y": "1"}))
        margins.append((r[7], {"x": r[0], "y": "1+x"}))
        margins.append((tol - r[10], {"x": r[0], "y": "exp(W(x))"}))
    m, pt = worst(margins)
    return CheckReport(
        check_name="hoorfar_hassani",
        grid=_grid_desc(x=grid),
        tolerance=tol,
        worst_margin=m,
        worst_point=pt,
        passed=m >= -tol,
        columns=LAMBERT_COLUMNS,
        rows=rows,
        details={"margin": "relative; equality case contributes tol - |rel err|"},
    )


def check_log_sandwich(grid: GridSpec, tol=REL_TOL, workers: int = 1) -> CheckReport:
    """x/(1+x) <= log(1+x) <= x and x/log(1+x) <= 1 + x/2."""
    xs = grid.points()
    rows = []
    margins = []
    for x in xs:
        z = mpmath.log1p(x)
        a, b, c = _rel(z, x / (1 + x)), _rel(x, z), _rel(1 + x / 2, x / z)
        rows.append([x, z, a, b, c])
        margins += [(a, {"x": x, "inequality": "x/(1+x) <= log(1+x)"}),
                    (b, {"x": x, "inequality": "log(1+x) <= x"}),
                    (c, {"x": x, "inequality": "x/log(1+x) <= 1+x/2"})]
    m, pt = worst(margins)
    return CheckReport(
        check_name="log_sandwich",
        grid=_grid_desc(x=grid),
        tolerance=tol,
        worst_margin=m,
        worst_point=pt,
        passed=m >= -tol,
        columns=["x", "log1p_x", "margin_lower", "margin_upper", "margin_corollary"],
        rows=rows,
        details={"margin": "relative"},
    )


# -- moment-bound chain ----------------------------------------------------


def mgf_chain_point(dist: Distribution, k: int) -> dict:
    """Exact moment and each upper bound in the proof, as logs of E (X/mu)^k."""
    mu = dist.mean()
    log_mu = log_fraction(mu)
    exact = dist.raw_moment(k)
    log_exact = log_fraction(exact) - k * log_mu if exact else mpmath.ninf
    b = to_hifloat(Fraction(k) / mu)
    t = lambert_w0(b).w
    # m_pois(t) (k/(e t))^k on the raw scale, then normalized
    log_chernoff = to_hifloat(mu) * mpmath.expm1(t) + k * (mpmath.log(k) - 1 - mpmath.log(t)) - k * log_mu
    poly, expo = bounds.corollary_bounds(k, to_hifloat(mu))
    return {
        "exact": log_exact,
        "chernoff": log_chernoff,
        "mgf_intermediate": bounds.mgf_intermediate_bound(k, to_hifloat(mu)).log_value,
        "theorem1": bounds.theorem1_bound(k, to_hifloat(mu)).log_value,
        "corollary_poly": poly.log_value,
        "corollary_exp": expo.log_value,
    }


def check_mgf_bound_chain(dist: Distribution, k, tol=CHAIN_TOL) -> CheckReport:
    """E X^k <= m_pois(t)(k/(e t))^k at t = W(k/mu), and that it matches exp(k f(B)).

    ``k`` may be an int or an iterable of ints.  Margins are log ratios.
    """
    ks = [k] if isinstance(k, int) else list(k)
    rows = []
    margins = []
    for kk in ks:
        if kk < 1:
            raise DomainError(f"k must be >= 1, got {kk}")
        v = mgf_chain_point(dist, kk)
        bound_margin = v["chernoff"] - v["exact"]
        agree = tol - abs(v["chernoff"] - v["mgf_intermediate"])
        rows.append([describe_dist(dist), kk, v["exact"], v["chernoff"], v["mgf_intermediate"], bound_margin, agree])
        margins.append((bound_margin, {"dist": describe_dist(dist), "k": kk, "kind": "exact <= chernoff"}))
        margins.append((agree, {"dist": describe_dist(dist), "k": kk, "kind": "chernoff == mgf_intermediate"}))
    m, pt = worst(margins)
    return CheckReport(
        check_name="mgf_bound_chain",
        grid={"dist": describe_dist(dist), "k": ks},
        tolerance=tol,
        worst_margin=m,
        worst_point=pt,
        passed=m >= -tol,
        columns=["dist", "k", "log_exact", "log_chernoff", "log_mgf_intermediate", "margin_bound", "margin_agreement"],
        rows=rows,
        details={"margin": "log ratio"},
    )


CHAIN_ORDER = ["exact", "mgf_intermediate", "theorem1", "corollary_poly", "corollary_exp"]


def check_proof_chain(cases: Iterable[tuple[Distribution, int]], tol=CHAIN_TOL) -> CheckReport:
    """exact <= mgf_intermediate <= theorem1 <= corollary poly <= corollary exp."""
    rows = []
    margins = []
    for dist, k in cases:
        v = mgf_chain_point(dist, k)
        steps = [v[b] - v[a] for a, b in zip(CHAIN_ORDER, CHAIN_ORDER[1:])]
        rows.append([describe_dist(dist), k, *(v[n] for n in CHAIN_ORDER), *steps])
        for (a, b), s in zip(zip(CHAIN_ORDER, CHAIN_ORDER[1:]), steps):
            margins.append((s, {"dist": describe_dist(dist), "k": k, "step": f"{a}<={b}"}))
    m, pt = worst(margins)
    return CheckReport(
        check_name="proof_chain",
        grid={"cases": len(rows)},
        tolerance=tol,
        worst_margin=m,
        worst_point=pt,
        passed=m >= -tol,
        columns=["dist", "k", *(f"log_{n}" for n in CHAIN_ORDER),
                 *(f"margin_{a}_{b}" for a, b in zip(CHAIN_ORDER, CHAIN_ORDER[1:]))],
        rows=rows,
        details={"margin": "log ratio"},
    )


# -- sub-Poissonian class --------------------------------------------------


def log_mgf(dist: Distribution, t) -> mpmath.mpf:
    """log E exp(tX) in closed form."""
    t = to_hifloat(t)
    et1 = mpmath.expm1(t)
    if isinstance(dist, Poisson):
        return to_hifloat(dist.mu) * et1
    if isinstance(dist, Binomial):
        return dist.n * mpmath.log1p(to_hifloat(dist.p) * et1)
    if isinstance(dist, BernoulliSum):
        return mpmath.fsum(mpmath.log1p(to_hifloat(p) * et1) for p in dist.probs)
    raise TypeError(f"no closed-form MGF for {dist!r}")


def check_subpoissonian_mgf(dist: Distribution, t_grid: GridSpec, tol=REL_TOL) -> CheckReport:
    """E exp(tX) <= exp(mu (e^t - 1)) on the grid; margin is the log ratio."""
    mu = to_hifloat(dist.mean())
    rows = []
    for t in t_grid.points():
        if t <= 0:
            raise DomainError("t grid must lie in t > 0")
        lm = log_mgf(dist, t)
        env = mu * mpmath.expm1(t)
        rows.append([t, lm, env, env - lm])
    m, pt = worst((r[3], {"t": r[0]}) for r in rows)
    name = describe_dist(dist)
    return CheckReport(
        check_name="subpoissonian_mgf",
        grid=_grid_desc(t=t_grid, dist=name),
        tolerance=tol,
        worst_margin=m,
        worst_point={**pt, "dist": name},
        passed=m >= -tol,
        columns=["t", "log_mgf", "log_envelope", "margin"],
        rows=rows,
        details={"margin": "log ratio", "dist": name},
    )


def geometric_log_mgf(mu, t) -> mpmath.mpf:
    """log of 1 / (1 - mu (e^t - 1)), finite for t < log(1 + 1/mu)."""
    return -mpmath.log1p(-to_hifloat(mu) * mpmath.expm1(to_hifloat(t)))


def check_exponential_counterexample(mu, t_grid: GridSpec) -> CheckReport:
    """1/(1 - mu(e^t - 1)) > exp(mu(e^t - 1)) strictly on the grid.

    The MGF here is that of the geometric law on {0, 1, ...} with mean mu.
    """
    mu = to_hifloat(mu)
    pole = mpmath.log1p(1 / mu)
    pts = t_grid.points()
    if pts[0] <= 0 or pts[-1] >= pole:
        raise DomainError(
            f"t grid must lie inside (0, log(1 + 1/mu)) = (0, {mpmath.nstr(pole, 12)})"
        )
    rows = []
    for t in pts:
        lm = geometric_log_mgf(mu, t)
        env = mu * mpmath.expm1(t)
        rows.append([t, lm, env, lm - env])
    m, pt = worst((r[3], {"t": r[0]}) for r in rows)
    return CheckReport(
        check_name="exponential_counterexample",
        grid=_grid_desc(t=t_grid, mu=mu),
        tolerance=0,
        worst_margin=m,
        worst_point={**pt, "mu": mu},
        passed=m > 0,
        columns=["t", "log_mgf", "log_envelope", "margin"],
        rows=rows,
        details={"margin": "log ratio, must be strictly positive"},
    )


# -- Bell-number lower bound and conjecture --------------------------------


def _theorem2_point(args):
    mu, k = args
    exact = poisson_raw_moment(mu, k)
    lhs = log_fraction(exact) - k * mpmath.log(mu)
    rhs = log_bell_power_lower(k, mu)
    return lhs, rhs


def check_theorem2(mu_max: int, k_grid: GridSpec, workers: int = 1, slack=THEOREM2_SLACK) -> CheckReport:
    """B(k, mu)/mu^k >= B_{k/mu}^mu (1 - slack) for mu in 1..mu_max.

    ``k_grid`` runs over k/mu; k = round(ratio * mu), and ratios that give
    the same k are evaluated once.
    """
    cases = []
    for mu in range(1, mu_max + 1):
        seen = set()
        for r in k_grid.points():
            k = int(mpmath.nint(r * mu))
            if k >= 1 and k not in seen:
                seen.add(k)
                cases.append((mu, k))
    vals = grid_map(_theorem2_point, cases, workers)
    log_slack = mpmath.log1p(-to_hifloat(slack))
    rows = []
    for (mu, k), (lhs, rhs) in zip(cases, vals):
        rows.append([mu, k, lhs, rhs, lhs - (rhs + log_slack)])
    m, pt = worst((r[4], {"mu": r[0], "k": r[1]}) for r in rows)
    return CheckReport(
        check_name="theorem2",
        grid=_grid_desc(mu=f"1..{mu_max}", k_over_mu=k_grid),
        tolerance=slack,
        worst_margin=m,
        worst_point=pt,
        passed=m >= 0,
        columns=["mu", "k", "log_exact_normalized", "log_bell_power", "margin"],
        rows=rows,
        details={"margin": "log ratio after the (1 - slack) factor"},
    )


def _conjecture_point(args):
    mu, b = args
    k = b * mu
    mid = touchard_dobinski(k, mu).log_value - k * mpmath.log(mu)
    lower = mu * bell_dobinski(b).log_value
    upper = k / (b + 1) * bell_dobinski(b + 1).log_value
    return k, lower, mid, upper


def conjecture_gap(b) -> mpmath.mpf:
    """Per-unit-k log gap between the conjectured upper bound and exp(k f(B)).

    Positive while the conjectured bound is above the MGF bound; independent of mu.
    """
    b = to_hifloat(b)
    return bell_dobinski(b + 1).log_value / (b + 1) - bounds.mgf_exponent(b)


def conjecture_mgf_crossing(lo=1, hi=200, samples: int = 200, xtol="1e-8"):
    """Smallest k/mu in [lo, hi] where the conjectured upper bound drops below exp(k f(B)).

    Scans a log grid for the first sign change of :func:`conjecture_gap`
    then bisects.  None when no crossing is found.
    """
    pts = GridSpec(str(lo), str(hi), samples, "log").points()
    prev_b, prev_g = None, None
    for b in pts:
        g = conjecture_gap(b)
        if prev_g is not None and prev_g > 0 >= g:
            a, c = prev_b, b
            while c - a > to_hifloat(xtol) * c:
                mid = (a + c) / 2
                if conjecture_gap(mid) > 0:
                    a = mid
                else:
                    c = mid
            return (a + c) / 2
        prev_b, prev_g = b, g
    return None


def conjecture_sweep(k_grid: GridSpec, mu_grid: GridSpec, tol=REL_TOL, workers: int = 1,
                     locate_crossing: bool = True) -> CheckReport:
    """Report-only sweep of the conjectured bracket on B(k, mu)^(1/k) / mu.

    ``k_grid`` runs over k/mu.  Points with mu >= 1 check
    B_{k/mu}^mu <= B(k,mu)/mu^k <= B_{k/mu+1}^{k/(k/mu+1)}; points with
    mu <= 1 check B(k,mu)/mu^k <= B_{k/mu}^mu.  Margins are log ratios.
    """
    cases = [(mu, b) for mu in mu_grid.points() for b in k_grid.points()]
    vals = grid_map(_conjecture_point, cases, workers)
    rows = []
    violations = []
    worst_lower = worst_upper = worst_small = None
    for (mu, b), (k, lower, mid, upper) in zip(cases, vals):
        m_lower = mid - lower if mu >= 1 else None
        m_upper = upper - mid if mu >= 1 else None
        m_small = lower - mid if mu <= 1 else None
        rows.append([mu, b, k, lower, mid, upper, m_lower, m_upper, m_small])
        for name, m in (("lower", m_lower), ("upper", m_upper), ("small_mu_upper", m_small)):
            if m is None:
                continue
            pt = {"mu": mu, "k_over_mu": b, "k": k}
            if name == "lower" and (worst_lower is None or m < worst_lower[0]):
                worst_lower = (m, pt)
            if name == "upper" and (worst_upper is None or m < worst_upper[0]):
                worst_upper = (m, pt)
            if name == "small_mu_upper" and (worst_small is None or m < worst_small[0]):
                worst_small = (m, pt)
            if m < -tol:
                violations.append({"inequality": name, **pt, "margin": m})
    present = [w for w in (worst_lower, worst_upper, worst_small) if w is not None]
    m, pt = worst(present)
    details = {
        "margin": "log ratio",
        "worst_lower": _pair(worst_lower),
        "worst_upper": _pair(worst_upper),
        "worst_small_mu_upper": _pair(worst_small),
        "violations": violations,
    }
    if locate_crossing:
        details["mgf_crossing_k_over_mu"] = conjecture_mgf_crossing()
    return CheckReport(
        check_name="conjecture_sweep",
        grid=_grid_desc(k_over_mu=k_grid, mu=mu_grid),
        tolerance=tol,
        worst_margin=m,
        worst_point=pt,
        passed=not violations,
        report_only=True,
        columns=["mu", "k_over_mu", "k", "log_lower", "log_exact_normalized", "log_upper",
                 "margin_lower", "margin_upper", "margin_small_mu_upper"],
        rows=rows,
        details=details,
    )


def _pair(w):
    if w is None:
        return None
    return {"margin": w[0], "point": w[1]}
