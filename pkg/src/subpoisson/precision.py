"""High-precision float plumbing.

Every ``HiFloat`` in this package is an :class:`mpmath.mpf` evaluated under a
working precision of at least :data:`DEFAULT_BITS` mantissa bits.  Error
budgets are carried on results (Lambert-W residuals, Dobinski tail bounds,
per-check tolerances) rather than on every arithmetic operation.
"""

from __future__ import annotations

import contextlib
from fractions import Fraction
from typing import Iterator, Union

import mpmath

HiFloat = mpmath.mpf
Real = Union[int, float, str, Fraction, "mpmath.mpf"]

DEFAULT_BITS = 113
MIN_BITS = 53


class PrecisionError(ValueError):
    """Requested tolerance or precision is outside what the context supports."""


def current_bits() -> int:
    return mpmath.mp.prec


@contextlib.contextmanager
def workprec(bits: int | None = None) -> Iterator[int]:
    """Run a block at ``bits`` of precision, never lowering the active one."""
    bits = DEFAULT_BITS if bits is None else int(bits)
    if bits < MIN_BITS:
        raise PrecisionError(f"precision {bits} bits is below the {MIN_BITS}-bit floor")
    bits = max(bits, mpmath.mp.prec)
    with mpmath.workprec(bits):
        yield bits


def eps(bits: int | None = None) -> mpmath.mpf:
    """Unit roundoff 2**(1 - bits)."""
    bits = current_bits() if bits is None else bits
    return mpmath.ldexp(mpmath.mpf(1), 1 - bits)


def tolerance_floor(bits: int | None = None) -> mpmath.mpf:
    """Smallest relative tolerance an iterative routine may be asked for."""
    return 8 * eps(bits)


def to_hifloat(value: Real) -> mpmath.mpf:
    """Convert at the active precision; Fractions are rounded once."""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, str) and "/" in value:
        return to_hifloat(Fraction(value))
    return mpmath.mpf(value)


def log_fraction(q: Fraction) -> mpmath.mpf:
    """Natural log of a positive rational without forming a huge float.

    Numerator and denominator may each exceed any float range.
    """
    if q <= 0:
        raise ValueError(f"log of non-positive rational {q}")
    return mpmath.log(mpmath.mpf(q.numerator)) - mpmath.log(mpmath.mpf(q.denominator))


def fmt(x, digits: int = 30) -> str:
    """Decimal string with ``digits`` significant digits."""
    if x is None:
        return ""
    if isinstance(x, Fraction):
        with workprec(max(DEFAULT_BITS, int(digits * 3.33) + 16)):
            return fmt(to_hifloat(x), digits)
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        x = mpmath.mpf(x)
    if isinstance(x, mpmath.mpf):
        if mpmath.isinf(x):
            return "inf" if x > 0 else "-inf"
        if mpmath.isnan(x):
            return "nan"
        return mpmath.nstr(x, digits, min_fixed=-5, max_fixed=digits, strip_zeros=False)
    return str(x)
