"""Exact raw, factorial and Bell-polynomial moments in rational arithmetic.

Raw moments of Binomial and Poisson variables are assembled from factorial
moments through Stirling numbers of the second kind::

    E X^k = sum_i S(k, i) * E[X^(i falling)]

where the factorial moment is ``n^(i falling) p^i`` for Binomial(n, p) and
``mu^i`` for Poisson(mu).  All values are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]

DEFAULT_MAX_K = 64
BERNOULLI_SUM_CAP = 20


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class SizeError(ValueError):
    """Input larger than a configured cap."""


def as_fraction(value) -> Fraction:
    """Exact rational from int, Fraction, or a decimal/rational string.

    Decimal strings are read over powers of ten, so "0.3" is exactly 3/10.
    Floats are rejected because their binary value is rarely what was meant.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected int, Fraction or str, got {type(value).__name__}")


# -- Stirling numbers -------------------------------------------------------


class StirlingTable:
    """Triangle of Stirling numbers of the second kind, grown on demand.

    ``rows[k][i] == S(k, i)`` for ``0 <= i <= k <= max_k``.  Readers never
    block; extension is serialized by a lock and published by rebinding
    ``rows`` to a longer tuple, so a reader sees either the old or the new
    triangle, both complete.
    """

    def __init__(self, max_k: int = DEFAULT_MAX_K):
        self._lock = threading.Lock()
        self.rows: tuple[tuple[int, ...], ...] = ((1,),)
        self.extend(max_k)

    @property
    def max_k(self) -> int:
        return len(self.rows) - 1

    def extend(self, max_k: int) -> None:
        if max_k <= self.max_k:
            return
        with self._lock:
            rows = list(self.rows)
            for k in range(len(rows), max_k + 1):
                prev = rows[k - 1]
                row = [0] * (k + 1)
                row[k] = 1
                for i in range(1, k):
                    row[i] = i * prev[i] + prev[i - 1]
                rows.append(tuple(row))
            self.rows = tuple(rows)

    def row(self, k: int) -> tuple[int, ...]:
        if k > self.max_k:
            # Grow geometrically so sweeps over k do not re-lock every step.
            self.extend(max(k, 2 * self.max_k))
        return self.rows[k]

    def __call__(self, k: int, i: int) -> int:
        return self.row(k)[i]


_TABLE = StirlingTable()


def stirling2(k: int, i: int) -> int:
    """S(k, i): partitions of a k-set into i non-empty blocks."""
    if k < 0 or i < 0:
        raise DomainError(f"stirling2 needs non-negative arguments, got ({k}, {i})")
    if i > k:
        raise DomainError(f"stirling2 needs i <= k, got ({k}, {i})")
    return _TABLE(k, i)


def stirling_row(k: int) -> tuple[int, ...]:
    if k < 0:
        raise DomainError(f"k must be non-negative, got {k}")
    return _TABLE.row(k)


def falling_factorial(n, k: int):
    """n (n-1) ... (n-k+1); works for int and Fraction ``n``."""
    if k < 0:
        raise DomainError(f"falling factorial order must be non-negative, got {k}")
    out = 1
    for j in range(k):
        out *= n - j
    return out


def bell_number(k: int) -> int:
    return sum(stirling_row(k))


# -- Distributions ----------------------------------------------------------


@dataclass(frozen=True)
class Poisson:
    mu: Fraction

    def __post_init__(self):
        object.__setattr__(self, "mu", as_fraction(self.mu))
        if self.mu <= 0:
            raise DomainError(f"Poisson mean must be positive, got {self.mu}")

    def mean(self) -> Fraction:
        return self.mu

    def raw_moment(self, k: int) -> Fraction:
        return poisson_raw_moment(self.mu, k)


@dataclass(frozen=True)
class Binomial:
    n: int
    p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", as_fraction(self.p))
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"Binomial trials must be a positive integer, got {self.n}")
        _check_prob(self.p)

    def mean(self) -> Fraction:
        return self.n * self.p

    def raw_moment(self, k: int) -> Fraction:
        return binomial_raw_moment(self.n, self.p, k)


@dataclass(frozen=True)
class BernoulliSum:
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(as_fraction(p) for p in self.probs)
        if not probs:
            raise DomainError("BernoulliSum needs at least one probability")
        for p in probs:
            _check_prob(p)
        object.__setattr__(self, "probs", probs)

    def mean(self) -> Fraction:
        return sum(self.probs, Fraction(0))

    def raw_moment(self, k: int) -> Fraction:
        return bernoulli_sum_raw_moment(self.probs, k)


Distribution = Union[Poisson, Binomial, BernoulliSum]


def _check_prob(p: Fraction) -> None:
    if not 0 < p <= 1:
        raise DomainError(f"success probability must lie in (0, 1], got {p}")


def _check_k(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {k!r}")


# -- Moments ----------------------------------------------------------------


def binomial_factorial_moment(n: int, p: Rational, k: int) -> Fraction:
    _check_k(k)
    return falling_factorial(n, k) * as_fraction(p) ** k


def binomial_raw_moment(n: int, p: Rational, k: int) -> Fraction:
    """E X^k for X ~ Binomial(n, p), exactly."""
    p = as_fraction(p)
    _check_prob(p)
    _check_k(k)
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    total = Fraction(0)
    ff = 1
    pk = Fraction(1)
    for i, s in enumerate(stirling_row(k)):
        if i > n:
            break
        if s:
            total += s * ff * pk
        ff *= n - i
        pk *= p
    return total


def poisson_raw_moment(mu: Rational, k: int) -> Fraction:
    """Touchard polynomial B(k, mu) = sum_i S(k, i) mu^i."""
    mu = as_fraction(mu)
    if mu <= 0:
        raise DomainError(f"Poisson mean must be positive, got {mu}")
    _check_k(k)
    total = Fraction(0)
    power = Fraction(1)
    for s in stirling_row(k):
        total += s * power
        power *= mu
    return total


def sum_pmf(probs: Sequence[Fraction]) -> list[Fraction]:
    """Distribution of a sum of independent Bernoulli variables."""
    pmf = [Fraction(1)]
    for p in probs:
        q = 1 - p
        nxt = [Fraction(0)] * (len(pmf) + 1)
        for j, w in enumerate(pmf):
            if w:
                nxt[j] += w * q
                nxt[j + 1] += w * p
        pmf = nxt
    return pmf


def bernoulli_sum_raw_moment(probs: Iterable, k: int, cap: int = BERNOULLI_SUM_CAP) -> Fraction:
    probs = [as_fraction(p) for p in probs]
    if not probs:
        raise DomainError("need at least one probability")
    if len(probs) > cap:
        raise SizeError(f"{len(probs)} summands exceeds the cap of {cap}")
    for p in probs:
        _check_prob(p)
    _check_k(k)
    if k == 0:
        return Fraction(1)
    return sum((w * j**k for j, w in enumerate(sum_pmf(probs)) if j), Fraction(0))


def describe(dist: Distribution) -> str:
    if isinstance(dist, Poisson):
        return f"Poisson({dist.mu})"
    if isinstance(dist, Binomial):
        return f"Binomial({dist.n},{dist.p})"
    return "BernoulliSum(" + ",".join(str(p) for p in dist.probs) + ")"


def raw_moment(dist: Distribution, k: int) -> Fraction:
    return dist.raw_moment(k)


def normalized_moment(dist: Distribution, k: int) -> Fraction:
    """E (X / mu)^k."""
    return dist.raw_moment(k) / dist.mean() ** k

