"""Bell numbers and Touchard polynomials at real order via Dobinski's formula.

    B(x, mu) = e^{-mu} sum_{i >= 0} i^x mu^i / i!,      B_x = B(x, 1)

For integer ``x`` this is the Poisson(mu) moment of order ``x``.  The series
is truncated with a certified geometric tail bound: once the term ratio
``r_i = (1 + 1/i)^x mu / (i + 1)`` drops below one it keeps decreasing, so
the remainder after term ``i`` is at most ``t_{i+1} / (1 - r_{i+1})``.

Convention at the ``i = 0`` term: ``0^0 = 1``, ``0^x = 0`` for ``x > 0``.  So
``B_0 = 1`` while ``B_x -> e^{-1} (e - 1) ~ 0.632`` as ``x -> 0+``; the
function is discontinuous at 0 and never tends to 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .precision import PrecisionError, tolerance_floor, to_hifloat

DEFAULT_REL_TOL = mpmath.mpf("1e-30")
MAX_X = 10_000


@dataclass(frozen=True)
class DobinskiResult:
    x: mpmath.mpf
    mu: mpmath.mpf
    value: mpmath.mpf
    log_value: mpmath.mpf
    terms_used: int
    tail_bound: mpmath.mpf  # absolute bound on the truncated remainder, same scale as value


def touchard_dobinski(x, mu=1, rel_tol=None, max_x=MAX_X) -> DobinskiResult:
    """B(x, mu) for real x >= 0 and mu > 0 with relative truncation error <= rel_tol."""
    x = to_hifloat(x)
    mu = to_hifloat(mu)
    if x < 0:
        raise ValueError(f"Dobinski order must be >= 0, got {x}")
    if mu <= 0:
        raise ValueError(f"mean must be positive, got {mu}")
    if x > max_x:
        raise PrecisionError(f"x = {mpmath.nstr(x, 10)} exceeds the cap {max_x}; raise max_x explicitly")
    tol = DEFAULT_REL_TOL if rel_tol is None else to_hifloat(rel_tol)
    if tol < tolerance_floor():
        raise PrecisionError(
            f"rel_tol {mpmath.nstr(tol, 5)} is below the floor for {mpmath.mp.prec}-bit precision"
        )

    log_mu = mpmath.log(mu)

    def ratio(i):
        return (1 + mpmath.mpf(1) / i) ** x * mu / (i + 1)

    # Running sum scaled by exp(-peak), peak = largest log-term so far, so
    # huge x never overflows.  Terms rise to one peak near i ~ mu x / log x.
    peak = mpmath.mpf(0)
    partial = mpmath.mpf(1) if x == 0 else mpmath.mpf(0)  # the i = 0 term
    log_fact = mpmath.mpf(0)
    min_i = int(mpmath.ceil(x)) + 2
    i = 1
    while True:
        log_fact += mpmath.log(i)
        lt = x * mpmath.log(i) + i * log_mu - log_fact
        if lt > peak:
            partial = partial * mpmath.exp(peak - lt) + 1
            peak = lt
        else:
            partial += mpmath.exp(lt - peak)
        if i >= min_i:
            r_next = ratio(i + 1)
            if r_next < 1:
                # t_{i+1} = t_i * r_i
                tail = mpmath.exp(lt - peak) * ratio(i) / (1 - r_next)
                if tail <= tol * partial:
                    break
        i += 1

    log_value = peak + mpmath.log(partial) - mu
    return DobinskiResult(
        x=x,
        mu=mu,
        value=mpmath.exp(log_value),
        log_value=log_value,
        terms_used=i + 1,
        tail_bound=tail * mpmath.exp(peak - mu),
    )


def bell_dobinski(x, rel_tol=None, max_x=MAX_X) -> DobinskiResult:
    """B_x = e^{-1} sum_i i^x / i!."""
    return touchard_dobinski(x, 1, rel_tol, max_x)


def bell_power_lower(k, mu: int) -> mpmath.mpf:
    """B_{k/mu}^mu, a lower bound on B(k, mu) / mu^k for integer mu >= 1."""
    return mpmath.exp(log_bell_power_lower(k, mu))


def log_bell_power_lower(k, mu: int) -> mpmath.mpf:
    if isinstance(mu, bool) or int(mu) != mu or mu < 1:
        raise ValueError(f"mu must be a positive integer, got {mu}")
    k = to_hifloat(k)
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    return int(mu) * bell_dobinski(k / int(mu)).log_value
