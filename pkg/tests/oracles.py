"""Independent reference computations used only by the tests.

Nothing here calls into the package; each oracle takes a different route
from the code it checks (enumeration, pmf summation, bisection, generic
series summation).
"""

from fractions import Fraction
from math import comb

import mpmath


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def stirling2_by_enumeration(k, i):
    return sum(1 for p in set_partitions(list(range(k))) if len(p) == i)


def binomial_pmf_moment(n, p, k):
    p = Fraction(p)
    return sum((Fraction(x) ** k * comb(n, x) * p**x * (1 - p) ** (n - x) for x in range(n + 1)), Fraction(0))


def bernoulli_sum_moment_by_enumeration(probs, k):
    """2^n enumeration over outcomes."""
    probs = [Fraction(p) for p in probs]
    total = Fraction(0)
    for mask in range(1 << len(probs)):
        w = Fraction(1)
        s = 0
        for j, p in enumerate(probs):
            if mask >> j & 1:
                w *= p
                s += 1
            else:
                w *= 1 - p
        total += w * s**k
    return total


def poisson_moment_by_series(mu, k, terms=400):
    """e^{-mu} sum_x x^k mu^x / x! in mpmath, truncated generously."""
    mu = mpmath.mpf(mu)
    return mpmath.exp(-mu) * mpmath.fsum(mpmath.mpf(x) ** k * mu**x / mpmath.factorial(x) for x in range(terms))


def lambert_w_bisection(x, iterations=400):
    x = mpmath.mpf(x)
    lo, hi = mpmath.mpf(0), max(mpmath.mpf(1), mpmath.log(x + 1) + 1)
    for _ in range(iterations):
        mid = (lo + hi) / 2
        if mid * mpmath.exp(mid) < x:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def dobinski_nsum(x, mu=1):
    """e^{-mu} sum_{i>=1} i^x mu^i / i! by mpmath's generic summation (x > 0)."""
    x, mu = mpmath.mpf(x), mpmath.mpf(mu)
    return mpmath.exp(-mu) * mpmath.nsum(lambda i: i**x * mu**i / mpmath.factorial(i), [1, mpmath.inf])


def bell_by_recurrence(n):
    """B_{m+1} = sum_j C(m, j) B_j."""
    b = [1]
    for m in range(n):
        b.append(sum(comb(m, j) * b[j] for j in range(m + 1)))
    return b[n]

