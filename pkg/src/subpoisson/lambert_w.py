"""Principal branch of the Lambert-W function for x >= 0.

``W(x)`` solves ``w e^w = x``.  The solver is a Halley iteration on
``f(w) = w e^w - x``; the returned :class:`WValue` carries the achieved
relative residual so callers can rely on the residual rather than on the
iterate.  Also provides the Hoorfar-Hassani family of upper bounds on
``e^{W(x)}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .precision import PrecisionError, tolerance_floor, to_hifloat

DEFAULT_REL_TOL = mpmath.mpf("1e-30")
MAX_ITER = 100


class LambertConvergenceError(ArithmeticError):
    def __init__(self, x, w, residual, iterations):
        super().__init__(
            f"Lambert W did not converge at x={mpmath.nstr(x, 20)} after {iterations} "
            f"iterations (last w={mpmath.nstr(w, 20)}, residual={mpmath.nstr(residual, 5)})"
        )
        self.x = x
        self.w = w
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class WValue:
    x: mpmath.mpf
    w: mpmath.mpf
    residual: mpmath.mpf  # |w e^w - x| / x
    iterations: int

    @property
    def exp_w(self) -> mpmath.mpf:
        """e^{W(x)} = x / W(x), or 1 at x = 0."""
        if self.x == 0:
            return mpmath.mpf(1)
        return self.x / self.w


def _asymptotic_guess(x):
    lx = mpmath.log(x)
    return lx - mpmath.log(lx)


def _initial_guess(x):
    if x < 1:
        return x
    if x >= mpmath.e:
        return _asymptotic_guess(x)
    # linear blend between w0 = x at 1 and the asymptotic guess at e
    s = (x - 1) / (mpmath.e - 1)
    return (1 - s) + s * _asymptotic_guess(mpmath.e)


def lambert_w0(x, rel_tol=None) -> WValue:
    """Principal-branch W(x) for x >= 0 with relative residual <= rel_tol."""
    x = to_hifloat(x)
    if x < 0:
        raise ValueError(f"lambert_w0 is only implemented for x >= 0, got {x}")
    if mpmath.isinf(x) or mpmath.isnan(x):
        raise ValueError(f"lambert_w0 needs a finite argument, got {x}")
    tol = DEFAULT_REL_TOL if rel_tol is None else to_hifloat(rel_tol)
    floor = tolerance_floor()
    if tol < floor:
        raise PrecisionError(
            f"rel_tol {mpmath.nstr(tol, 5)} is below the floor {mpmath.nstr(floor, 5)} "
            f"for {mpmath.mp.prec}-bit precision"
        )
    if x == 0:
        return WValue(x, mpmath.mpf(0), mpmath.mpf(0), 0)

    w = _initial_guess(x)
    residual = mpmath.inf
    for it in range(1, MAX_ITER + 1):
        ew = mpmath.exp(w)
        f = w * ew - x
        residual = abs(f) / x
        if residual <= tol:
            return WValue(x, w, residual, it - 1)
        wp1 = w + 1
        # Halley: w -= f / (e^w (w+1) - (w+2) f / (2 (w+1)))
        w = w - f / (ew * wp1 - (w + 2) * f / (2 * wp1))
        if w <= 0:
            # principal branch is positive for x > 0; restart from a safe point
            w = mpmath.mpf(x) / (1 + x)
    raise LambertConvergenceError(x, w, residual, MAX_ITER)


def exp_w(x, rel_tol=None) -> mpmath.mpf:
    """e^{W(x)} for x >= 0."""
    return lambert_w0(x, rel_tol).exp_w


def hoorfar_hassani_upper(x, y) -> mpmath.mpf:
    """(x + y) / (1 + log y), an upper bound on e^{W(x)} for y > 1/e, x > -1/e."""
    x = to_hifloat(x)
    y = to_hifloat(y)
    if not y > 1 / mpmath.e:
        raise ValueError(f"need y > 1/e, got y={mpmath.nstr(y, 15)}")
    if not x > -1 / mpmath.e:
        raise ValueError(f"need x > -1/e, got x={mpmath.nstr(x, 15)}")
    if not x + y > 0:
        raise ValueError("need x + y > 0")
    return (x + y) / (1 + mpmath.log(y))
