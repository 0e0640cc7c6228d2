import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subpoisson.lambert_w import (
    LambertConvergenceError,
    exp_w,
    hoorfar_hassani_upper,
    lambert_w0,
)
from subpoisson.precision import PrecisionError

from oracles import lambert_w_bisection

W1 = "0.567143290409783872999968662210356"
EXP_W1 = "1.76322283435189671022520177695"

xs = st.floats(min_value=1e-9, max_value=1e9, allow_nan=False, allow_infinity=False)


class TestLambertW:
    def test_zero(self):
        r = lambert_w0(0)
        assert r.w == 0 and r.exp_w == 1 and r.iterations == 0

    def test_omega_constant(self):
        r = lambert_w0(1)
        assert abs(r.w - mpmath.mpf(W1)) < mpmath.mpf("1e-32")
        assert abs(r.exp_w - mpmath.mpf(EXP_W1)) < mpmath.mpf("1e-28")

    def test_e(self):
        assert abs(lambert_w0(mpmath.e).w - 1) < mpmath.mpf("1e-30")

    @pytest.mark.parametrize("x", ["1e-9", "0.001", "0.5", "2", "2.5", "10", "1e5", "1e9"])
    def test_bisection_oracle(self, x):
        w = lambert_w0(x).w
        ref = lambert_w_bisection(x)
        assert abs(w - ref) <= mpmath.mpf("1e-29") * ref

    @settings(max_examples=200)
    @given(xs)
    def test_matches_mpmath(self, x):
        r = lambert_w0(x)
        ref = mpmath.lambertw(mpmath.mpf(x)).real
        assert abs(r.w - ref) <= mpmath.mpf("1e-29") * ref
        assert r.residual <= mpmath.mpf("1e-30")
        assert r.iterations <= 10

    @given(xs)
    def test_derivative_identity(self, x):
        # W'(x) = W / (x (1 + W))
        x = mpmath.mpf(x)
        w = lambert_w0(x).w
        d = mpmath.diff(lambda t: lambert_w0(t).w, x)
        assert abs(d - w / (x * (1 + w))) <= mpmath.mpf("1e-15") * abs(d)

    @given(xs, xs)
    def test_monotone(self, a, b):
        a, b = sorted((a, b))
        assert lambert_w0(a).w <= lambert_w0(b).w

    @given(st.floats(min_value=3, max_value=1e9))
    def test_log_sandwich(self, x):
        # log x - log log x <= W(x) <= log x for x >= e
        x = mpmath.mpf(x)
        w = lambert_w0(x).w
        assert mpmath.log(x) - mpmath.log(mpmath.log(x)) <= w <= mpmath.log(x)

    def test_exp_w_is_x_over_w(self):
        assert abs(exp_w(3) - mpmath.exp(lambert_w0(3).w)) < mpmath.mpf("1e-28")

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            lambert_w0(-0.1)

    def test_tolerance_below_floor(self):
        with pytest.raises(PrecisionError):
            lambert_w0(1, rel_tol="1e-60")

    def test_higher_precision_allows_tighter_tolerance(self):
        with mpmath.workprec(400):
            r = lambert_w0(1, rel_tol="1e-100")
            assert r.residual <= mpmath.mpf("1e-100")

    def test_convergence_error_fields(self):
        err = LambertConvergenceError(mpmath.mpf(2), mpmath.mpf(1), mpmath.mpf("0.1"), 100)
        assert err.iterations == 100 and "did not converge" in str(err)


class TestHoorfarHassani:
    @given(st.floats(min_value=0, max_value=1e6), st.floats(min_value=0.4, max_value=1e6))
    def test_upper_bound(self, x, y):
        assert exp_w(x) <= hoorfar_hassani_upper(x, y) * (1 + mpmath.mpf("1e-25"))

    @given(st.floats(min_value=1e-6, max_value=1e6))
    def test_equality_at_y_equal_exp_w(self, x):
        e = exp_w(x)
        assert abs(hoorfar_hassani_upper(x, e) - e) <= mpmath.mpf("1e-25") * e

    def test_y_one(self):
        assert hoorfar_hassani_upper(1, 1) == 2

    @pytest.mark.parametrize("x,y", [(1, "0.3"), (-1, 1), ("-0.5", "1")])
    def test_domain(self, x, y):
        with pytest.raises(ValueError):
            hoorfar_hassani_upper(x, y)
