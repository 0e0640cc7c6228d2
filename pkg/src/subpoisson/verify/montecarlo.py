"""Seeded Monte Carlo estimates of E (X/mu)^k.

RNG: numpy ``Generator(PCG64)`` (period 2**128).  Worker ``j`` of ``w`` gets
its stream from ``SeedSequence([seed, j])`` and ``samples // w`` draws (the
first ``samples % w`` workers take one extra).  Per-worker sums are reduced
in worker order, so a fixed (seed, workers) pair reproduces bit-for-bit.

Samplers:
  Poisson, mu <= 30   inversion against the float64 CDF
  Poisson, mu > 30    numpy's transformed-rejection sampler (PTRS)
  Binomial, n <= 1000 sum of n Bernoulli draws
  Binomial, n > 1000  numpy's BTPE sampler
  BernoulliSum        one Bernoulli draw per summand
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from ..exact_moments import BernoulliSum, Binomial, DomainError, Distribution, Poisson, describe

RNG_ALGORITHM = "numpy.random.PCG64 seeded by SeedSequence([seed, worker])"
MIN_SAMPLES = 1000
CHUNK = 20_000
Z99 = NormalDist().inv_cdf(0.995)


@dataclass(frozen=True)
class MCEstimate:
    distribution: str
    k: int
    sample_count: int
    seed: int
    workers: int
    estimate: float
    std_error: float
    ci99_half_width: float
    rng: str = RNG_ALGORITHM

    def contains(self, value: float, n_se: float | None = None) -> bool:
        half = self.ci99_half_width if n_se is None else n_se * self.std_error
        return abs(self.estimate - value) <= half


def _poisson_inversion(rng, mu: float, size: int) -> np.ndarray:
    # CDF table out to where the tail mass is below double resolution
    kmax = int(mu + 12 * math.sqrt(mu) + 30)
    ks = np.arange(kmax + 1)
    logpmf = ks * math.log(mu) - mu - np.array([math.lgamma(k + 1) for k in ks])
    cdf = np.cumsum(np.exp(logpmf))
    u = rng.random(size)
    return np.minimum(np.searchsorted(cdf, u, side="right"), kmax)


def draw(dist: Distribution, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` independent copies of X as int64."""
    if isinstance(dist, Poisson):
        mu = float(dist.mu)
        if mu <= 30:
            return _poisson_inversion(rng, mu, size)
        return rng.poisson(mu, size)
    if isinstance(dist, Binomial):
        p = float(dist.p)
        if dist.n > 1000:
            return rng.binomial(dist.n, p, size)
        out = np.zeros(size, dtype=np.int64)
        rows = max(1, CHUNK * 10 // dist.n)
        for start in range(0, size, rows):
            m = min(rows, size - start)
            out[start:start + m] = (rng.random((m, dist.n)) < p).sum(axis=1)
        return out
    if isinstance(dist, BernoulliSum):
        ps = np.array([float(p) for p in dist.probs])
        return (rng.random((size, len(ps))) < ps).sum(axis=1)
    raise TypeError(f"cannot sample {dist!r}")


def _worker_sums(dist, k, mu, seed, index, count):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < count:
        m = min(CHUNK, count - done)
        y = (draw(dist, rng, m) / mu) ** k
        total += float(np.sum(y))
        total_sq += float(np.sum(y * y))
        done += m
    return total, total_sq


def monte_carlo_moment(dist: Distribution, k: int, samples: int, seed: int, workers: int = 1) -> MCEstimate:
    if samples < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    workers = max(1, int(workers))
    mu = float(dist.mean())
    base, extra = divmod(samples, workers)
    counts = [base + (1 if j < extra else 0) for j in range(workers)]
    args = [(dist, k, mu, seed, j, c) for j, c in enumerate(counts)]
    if workers == 1:
        parts = [_worker_sums(*a) for a in args]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda a: _worker_sums(*a), args))
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    mean = total / samples
    var = max(0.0, (total_sq - samples * mean * mean) / (samples - 1))
    se = math.sqrt(var / samples)
    return MCEstimate(
        distribution=describe(dist),
        k=k,
        sample_count=samples,
        seed=seed,
        workers=workers,
        estimate=mean,
        std_error=se,
        ci99_half_width=Z99 * se,
    )
