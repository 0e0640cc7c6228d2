"""Tables of every requested bound against the exact moment over a (k, mu) grid."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import bounds
from .bounds import BoundKind
from .exact_moments import Binomial, Poisson, normalized_moment
from .precision import fmt, log_fraction, to_hifloat, tolerance_floor
from .verify.report import SCHEMA_VERSION

CSV_DIGITS = 20


@dataclass
class SweepRow:
    k: object
    mu: object
    log_exact: mpmath.mpf | None
    logs: dict[BoundKind, mpmath.mpf | None]
    margins: dict[BoundKind, mpmath.mpf | None]


@dataclass
class SweepReport:
    kinds: list[BoundKind]
    exact_label: str | None
    rows: list[SweepRow] = field(default_factory=list)

    @property
    def violations(self) -> list[tuple[SweepRow, BoundKind]]:
        """Negative margins beyond rounding, which scales with the size of the log."""
        out = []
        for r in self.rows:
            slack = tolerance_floor() * (1 + abs(r.log_exact or 0))
            out += [(r, kind) for kind, m in r.margins.items() if m is not None and m < -slack]
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        header = ["schema_version", "k", "mu", "k_over_mu", "log_exact"]
        header += [f"log_{k.value}" for k in self.kinds]
        header += [f"margin_{k.value}" for k in self.kinds]
        w.writerow(header)
        for r in self.rows:
            ratio = to_hifloat(r.k) / to_hifloat(r.mu)
            w.writerow([SCHEMA_VERSION, str(r.k), str(r.mu), fmt(ratio, CSV_DIGITS), fmt(r.log_exact, CSV_DIGITS),
                        *(fmt(r.logs[k], CSV_DIGITS) for k in self.kinds),
                        *(fmt(r.margins[k], CSV_DIGITS) for k in self.kinds)])
        return buf.getvalue()

    def series(self) -> dict[str, list[tuple[float, float]]]:
        """log10(k/mu) against log10 of each normalized quantity, one series per (quantity, mu)."""
        out: dict[str, list[tuple[float, float]]] = {}
        mus = sorted({r.mu for r in self.rows})
        ln10 = mpmath.log(10)
        for mu in mus:
            suffix = f" (mu={mu})" if len(mus) > 1 else ""
            for r in (r for r in self.rows if r.mu == mu):
                x = float(mpmath.log10(to_hifloat(r.k) / to_hifloat(mu)))
                if r.log_exact is not None:
                    out.setdefault(f"exact{suffix}", []).append((x, float(r.log_exact / ln10)))
                for kind in self.kinds:
                    v = r.logs[kind]
                    if v is not None:
                        out.setdefault(f"{kind.value}{suffix}", []).append((x, float(v / ln10)))
        return out


def _exact_dist(exact: str | None, mu, binomial: tuple[int, Fraction] | None):
    if exact == "poisson":
        return Poisson(Fraction(str(mu)) if not isinstance(mu, Fraction) else mu)
    if exact == "binomial":
        n, p = binomial
        return Binomial(n, p)
    return None


def run_sweep(kinds: list[BoundKind], ks: list, mus: list, *, exact: str | None = None,
              binomial: tuple[int, Fraction] | None = None, c=bounds.LATALA_DEFAULT_C_LOWER,
              C=bounds.LATALA_DEFAULT_C_UPPER) -> SweepReport:
    """Evaluate each bound at each (k, mu); ``exact`` is None, "poisson" or "binomial".

    For the Binomial overlay ``mu`` is fixed to n p.  Bounds that do not
    apply at a point (integer-only kinds at real k, conjecture at mu < 1)
    are left blank.
    """
    if not kinds:
        raise ValueError("need at least one bound")
    if exact == "binomial":
        if binomial is None:
            raise ValueError("binomial overlay needs (n, p)")
        mus = [binomial[0] * binomial[1]]
    report = SweepReport(kinds, exact)
    for mu in mus:
        dist = _exact_dist(exact, mu, binomial)
        for k in ks:
            is_int = isinstance(k, int) or (isinstance(k, Fraction) and k.denominator == 1)
            log_exact = None
            if dist is not None and is_int:
                log_exact = log_fraction(normalized_moment(dist, int(k)))
            logs = {}
            for kind in kinds:
                logs[kind] = _evaluate(kind, k, mu, is_int, c, C, binomial)
            margins = {}
            for kind in kinds:
                v = logs[kind]
                if v is None or log_exact is None:
                    margins[kind] = None
                else:
                    margins[kind] = log_exact - v if kind.is_lower else v - log_exact
            report.rows.append(SweepRow(k, mu, log_exact, logs, margins))
    return report


def _evaluate(kind, k, mu, is_int, c, C, binomial):
    k_hf, mu_hf = to_hifloat(k), to_hifloat(mu)
    try:
        if kind in (BoundKind.BEREND_TASSA, BoundKind.BEREND_TASSA_CAP, BoundKind.POISSON_LOWER):
            if not is_int:
                return None
            return bounds.evaluate(kind, int(k), mu_hf).log_value
        if kind is BoundKind.BINOMIAL_LOWER:
            if binomial is None or not is_int:
                return None
            return bounds.binomial_lower(binomial[0], binomial[1], int(k)).log_value
        if kind is BoundKind.BELL_POWER_LOWER:
            if Fraction(str(mu)).denominator != 1:
                return None
            return bounds.bell_power_lower_bound(k_hf, int(Fraction(str(mu)))).log_value
        if kind in (BoundKind.CONJECTURE_LOWER, BoundKind.CONJECTURE_UPPER) and mu_hf < 1:
            return None
        return bounds.evaluate(kind, k_hf, mu_hf, c=c, C=C).log_value
    except bounds.DomainError:
        return None
