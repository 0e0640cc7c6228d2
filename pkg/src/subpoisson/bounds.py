"""Closed-form bounds on the normalized moment E (X/mu)^k.

Every evaluator returns a :class:`BoundResult` whose ``log_value`` is the
natural log of the bound on ``E (X/mu)^k``.  Use :func:`raw_log` to turn a
normalized log bound into one on ``E X^k``.  Values are only materialized
when the log is below :data:`MATERIALIZE_LIMIT` in magnitude.

Notation: ``B = k / mu``, ``t = W(B)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath

from .bell_real import bell_dobinski, log_bell_power_lower
from .exact_moments import DomainError, as_fraction, bell_number, falling_factorial
from .lambert_w import lambert_w0
from .precision import log_fraction, to_hifloat

MATERIALIZE_LIMIT = 700
BEREND_TASSA_CAP_CONSTANT = Fraction(792, 1000)

# Illustrative only: the universal constants are not known numerically.
LATALA_DEFAULT_C_LOWER = Fraction(1, 2)
LATALA_DEFAULT_C_UPPER = Fraction(2)


class BoundKind(enum.Enum):
    THEOREM1 = "theorem1"
    COROLLARY_POLY = "corollary_poly"
    COROLLARY_EXP = "corollary_exp"
    MGF_INTERMEDIATE = "mgf_intermediate"
    LATALA_LOWER = "latala_lower"
    LATALA_UPPER = "latala_upper"
    BEREND_TASSA = "berend_tassa"
    BEREND_TASSA_CAP = "berend_tassa_cap"
    POISSON_LOWER = "poisson_lower"
    BINOMIAL_LOWER = "binomial_lower"
    BELL_POWER_LOWER = "bell_power_lower"
    CONJECTURE_LOWER = "conjecture_lower"
    CONJECTURE_UPPER = "conjecture_upper"

    @property
    def is_lower(self) -> bool:
        return self in _LOWER_KINDS


_LOWER_KINDS = {
    BoundKind.LATALA_LOWER,
    BoundKind.POISSON_LOWER,
    BoundKind.BINOMIAL_LOWER,
    BoundKind.BELL_POWER_LOWER,
    BoundKind.CONJECTURE_LOWER,
}


@dataclass(frozen=True)
class BoundResult:
    kind: BoundKind
    log_value: mpmath.mpf | None  # None only for a vacuous (non-positive) lower bound
    vacuous: bool = False
    constant: Fraction | None = None  # Latala c or C

    @property
    def value(self) -> mpmath.mpf | None:
        """exp(log_value), or None when it would overflow a double."""
        if self.log_value is None:
            return mpmath.mpf(0) if self.vacuous else None
        if abs(self.log_value) >= MATERIALIZE_LIMIT:
            return None
        return mpmath.exp(self.log_value)


def raw_log(result: BoundResult, k, mu) -> mpmath.mpf | None:
    """log of the matching bound on E X^k."""
    if result.log_value is None:
        return None
    return result.log_value + to_hifloat(k) * mpmath.log(to_hifloat(mu))


def _positive(name, v):
    v = to_hifloat(v)
    if not v > 0:
        raise DomainError(f"{name} must be positive, got {v}")
    return v


def _log_x_over_log1p(b):
    # log(b / log(1 + b)); positive for all b > 0
    return mpmath.log(b) - mpmath.log(mpmath.log1p(b))


def theorem1_bound(k, mu) -> BoundResult:
    """((k/mu) / log(1 + k/mu))^k."""
    k = _positive("k", k)
    b = k / _positive("mu", mu)
    return BoundResult(BoundKind.THEOREM1, k * _log_x_over_log1p(b))


def corollary_bounds(k, mu) -> tuple[BoundResult, BoundResult]:
    """(1 + k/(2mu))^k and exp(k^2/(2mu))."""
    k = _positive("k", k)
    b = k / _positive("mu", mu)
    return (
        BoundResult(BoundKind.COROLLARY_POLY, k * mpmath.log1p(b / 2)),
        BoundResult(BoundKind.COROLLARY_EXP, k * b / 2),
    )


def mgf_exponent(b) -> mpmath.mpf:
    """f(B) = 1/t + t - 1 - 1/B with t = W(B)."""
    b = _positive("B", b)
    t = lambert_w0(b).w
    return 1 / t + t - 1 - 1 / b


def mgf_intermediate_bound(k, mu) -> BoundResult:
    """exp(k f(k/mu)), the Chernoff bound at the tilt t = W(k/mu)."""
    k = _positive("k", k)
    b = k / _positive("mu", mu)
    return BoundResult(BoundKind.MGF_INTERMEDIATE, k * mgf_exponent(b))


def latala_bounds(k, mu, c, C) -> tuple[BoundResult, BoundResult]:
    """(c B / log(1+B))^k and (C B / log(1+B))^k for constants 0 < c < 1 < C.

    ``c = C = 1`` is accepted as the degenerate case that reproduces
    :func:`theorem1_bound`.
    """
    c = as_fraction(c)
    C = as_fraction(C)
    degenerate = c == 1 and C == 1
    if not degenerate and not (0 < c < 1 < C):
        raise DomainError(f"need 0 < c < 1 < C, got c={c}, C={C}")
    base = theorem1_bound(k, mu).log_value
    k = to_hifloat(k)
    return (
        BoundResult(BoundKind.LATALA_LOWER, base + k * log_fraction(c), constant=c),
        BoundResult(BoundKind.LATALA_UPPER, base + k * log_fraction(C), constant=C),
    )


def log_bell_cap(k: int) -> mpmath.mpf:
    """log of (0.792 k / log(k+1))^k."""
    k = mpmath.mpf(k)
    return k * (log_fraction(BEREND_TASSA_CAP_CONSTANT) + mpmath.log(k) - mpmath.log(mpmath.log1p(k)))


def berend_tassa_bound(k: int, mu, use_cap: bool = False) -> BoundResult:
    """B_k max(mu, mu^k) / mu^k, optionally with B_k replaced by its cap."""
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    k = int(k)
    mu = _positive("mu", mu)
    log_mu = mpmath.log(mu)
    log_bk = log_bell_cap(k) if use_cap else mpmath.log(mpmath.mpf(bell_number(k)))
    log_max = max(log_mu, k * log_mu)
    kind = BoundKind.BEREND_TASSA_CAP if use_cap else BoundKind.BEREND_TASSA
    return BoundResult(kind, log_bk + log_max - k * log_mu)


def poisson_lower(k: int, mu) -> BoundResult:
    """1 + k(k-1)/(2mu)."""
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DomainError(f"k must be a non-negative integer, got {k}")
    mu = _positive("mu", mu)
    k = int(k)
    return BoundResult(BoundKind.POISSON_LOWER, mpmath.log1p(mpmath.mpf(k * (k - 1)) / (2 * mu)))


def binomial_lower_value(n: int, p, k: int) -> Fraction:
    """1 + C(k,2) (1-p)/(np) (1 - C(k,2)/n), exactly."""
    p = as_fraction(p)
    c2 = comb(k, 2)
    return 1 + Fraction(c2) * (1 - p) / (n * p) * (1 - Fraction(c2, n))


def binomial_lower(n: int, p, k: int) -> BoundResult:
    """Lower bound on E (X/(np))^k for X ~ Binomial(n, p).

    Flagged vacuous when C(k,2) >= n: the product step of the derivation
    needs 1 - C(k,2)/n >= 0, and k > n implies it.  A non-positive value is
    returned with ``log_value=None``.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    p = as_fraction(p)
    if not 0 < p <= 1:
        raise DomainError(f"p must lie in (0, 1], got {p}")
    value = binomial_lower_value(n, p, int(k))
    vacuous = comb(int(k), 2) >= n
    if value <= 0:
        return BoundResult(BoundKind.BINOMIAL_LOWER, None, vacuous=True)
    return BoundResult(BoundKind.BINOMIAL_LOWER, log_fraction(value), vacuous=vacuous)


def binomial_lower_chain(n: int, p, k: int) -> list[Fraction]:
    """The successive lower bounds on E (X/(np))^k, left to right, exactly.

    0. n^(k falling) p^k + C(k,2) n^((k-1) falling) p^(k-1), normalized
    1. prod_{i<k}(1 - i/n) * (1 + C(k,2)/((n-k+1)p))
    2. (1 - C(k,2)/n) (1 + C(k,2)/(np))
    3. 1 + C(k,2)(1-p)/(np) (1 - C(k,2)/n)

    Lines 0 and 1 are equal.  Line 3 exceeds line 2 by (C(k,2)/n)^2, so it
    does not follow from line 2 by itself.
    """
    p = as_fraction(p)
    c2 = comb(k, 2)
    np_ = n * p
    line0 = (falling_factorial(n, k) * p**k + c2 * falling_factorial(n, k - 1) * p ** (k - 1)) / np_**k
    prod = Fraction(1)
    for i in range(k):
        prod *= 1 - Fraction(i, n)
    line1 = prod * (1 + Fraction(c2) / ((n - k + 1) * p)) if n - k + 1 != 0 else Fraction(0)
    line2 = (1 - Fraction(c2, n)) * (1 + Fraction(c2) / np_)
    line3 = binomial_lower_value(n, p, k)
    return [line0, line1, line2, line3]


def log_conjecture_pair(k, mu) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(mu log B_{k/mu}, k/(k/mu + 1) log B_{k/mu + 1})."""
    k = _positive("k", k)
    b = k / _positive("mu", mu)
    lower = mu * bell_dobinski(b).log_value
    upper = k / (b + 1) * bell_dobinski(b + 1).log_value
    return lower, upper


def conjecture_bounds(k, mu) -> tuple[BoundResult, BoundResult]:
    """Conjectured bracket on E (X/mu)^k for Poisson mu >= 1.

    lower = B_{k/mu}^mu, upper = B_{k/mu+1}^{k/(k/mu+1)}.  For 0 < mu <= 1 the
    conjecture reverses; see :func:`conjecture_small_mu_upper`.
    """
    mu = _positive("mu", mu)
    if mu < 1:
        raise DomainError(f"conjecture bracket needs mu >= 1, got {mu}; use conjecture_small_mu_upper")
    lower, upper = log_conjecture_pair(k, mu)
    return (
        BoundResult(BoundKind.CONJECTURE_LOWER, lower),
        BoundResult(BoundKind.CONJECTURE_UPPER, upper),
    )


def conjecture_small_mu_upper(k, mu) -> BoundResult:
    """For 0 < mu <= 1 the conjectured upper bound is B_{k/mu}^mu."""
    mu = _positive("mu", mu)
    if mu > 1:
        raise DomainError(f"small-mean form needs mu <= 1, got {mu}")
    lower, _ = log_conjecture_pair(k, mu)
    return BoundResult(BoundKind.CONJECTURE_UPPER, lower)


def bell_power_lower_bound(k, mu: int) -> BoundResult:
    return BoundResult(BoundKind.BELL_POWER_LOWER, log_bell_power_lower(k, mu))


def evaluate(kind: BoundKind, k, mu, *, c=LATALA_DEFAULT_C_LOWER, C=LATALA_DEFAULT_C_UPPER, n=None, p=None) -> BoundResult:
    """Dispatch by kind; Binomial needs ``n`` and ``p``."""
    if kind is BoundKind.THEOREM1:
        return theorem1_bound(k, mu)
    if kind is BoundKind.COROLLARY_POLY:
        return corollary_bounds(k, mu)[0]
    if kind is BoundKind.COROLLARY_EXP:
        return corollary_bounds(k, mu)[1]
    if kind is BoundKind.MGF_INTERMEDIATE:
        return mgf_intermediate_bound(k, mu)
    if kind is BoundKind.LATALA_LOWER:
        return latala_bounds(k, mu, c, C)[0]
    if kind is BoundKind.LATALA_UPPER:
        return latala_bounds(k, mu, c, C)[1]
    if kind is BoundKind.BEREND_TASSA:
        return berend_tassa_bound(k, mu)
    if kind is BoundKind.BEREND_TASSA_CAP:
        return berend_tassa_bound(k, mu, use_cap=True)
    if kind is BoundKind.POISSON_LOWER:
        return poisson_lower(k, mu)
    if kind is BoundKind.BINOMIAL_LOWER:
        if n is None or p is None:
            raise DomainError("binomial_lower needs n and p")
        return binomial_lower(n, p, k)
    if kind is BoundKind.BELL_POWER_LOWER:
        return bell_power_lower_bound(k, mu)
    if kind is BoundKind.CONJECTURE_LOWER:
        return conjecture_bounds(k, mu)[0]
    if kind is BoundKind.CONJECTURE_UPPER:
        return conjecture_bounds(k, mu)[1]
    raise DomainError(f"unknown bound kind {kind}")
