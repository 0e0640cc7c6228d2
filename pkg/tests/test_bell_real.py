import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subpoisson.bell_real import (
    bell_dobinski,
    bell_power_lower,
    log_bell_power_lower,
    touchard_dobinski,
)
from subpoisson.exact_moments import bell_number, poisson_raw_moment
from subpoisson.precision import PrecisionError

from oracles import dobinski_nsum


class TestBellDobinski:
    @pytest.mark.parametrize("n", range(0, 16))
    def test_integer_orders(self, n):
        v = bell_dobinski(n).value
        assert abs(v - bell_number(n)) <= mpmath.mpf("1e-28") * bell_number(n)

    @pytest.mark.parametrize("x", ["0.5", "2.5", "7.3", "12.25"])
    def test_non_integer_against_nsum(self, x):
        assert abs(bell_dobinski(x).value - dobinski_nsum(x)) <= mpmath.mpf("1e-25") * dobinski_nsum(x)

    def test_zero_and_one(self):
        assert bell_dobinski(0).value == pytest.approx(1, abs=1e-30)
        assert abs(bell_dobinski(1).value - 1) < mpmath.mpf("1e-29")

    def test_limit_at_zero_is_not_zero(self):
        # the i = 0 term vanishes for x > 0, leaving e^{-1}(e - 1)
        v = bell_dobinski("1e-12").value
        assert abs(v - (1 - mpmath.exp(-1))) < mpmath.mpf("1e-10")

    @settings(max_examples=40)
    @given(st.floats(min_value=1, max_value=60), st.floats(min_value=0, max_value=5))
    def test_monotone_for_x_at_least_one(self, x, dx):
        assert bell_dobinski(x).value <= bell_dobinski(x + dx).value * (1 + mpmath.mpf("1e-28"))

    def test_tail_bound_reported(self):
        r = bell_dobinski("3.5")
        assert 0 <= r.tail_bound <= mpmath.mpf("1e-30") * r.value
        assert r.terms_used > 6

    def test_large_order_stays_finite(self):
        r = bell_dobinski(2000)
        ref = mpmath.log(mpmath.bell(2000))
        assert abs(r.log_value - ref) < mpmath.mpf("1e-25") * ref

    def test_guards(self):
        with pytest.raises(ValueError):
            bell_dobinski(-1)
        with pytest.raises(PrecisionError):
            bell_dobinski(20000)
        with pytest.raises(PrecisionError):
            bell_dobinski(2, rel_tol="1e-80")


class TestTouchard:
    @pytest.mark.parametrize("mu,k", [(2, 3), ("3.5", 6), ("0.25", 4)])
    def test_integer_orders_are_poisson_moments(self, mu, k):
        from fractions import Fraction

        exact = poisson_raw_moment(Fraction(str(mu)), k)
        v = touchard_dobinski(k, mu).value
        assert abs(v - mpmath.mpf(exact.numerator) / exact.denominator) < mpmath.mpf("1e-28") * v

    def test_against_nsum(self):
        assert abs(touchard_dobinski("4.5", 3).value - dobinski_nsum("4.5", 3)) < mpmath.mpf("1e-24") * 1000

    def test_bad_mean(self):
        with pytest.raises(ValueError):
            touchard_dobinski(2, 0)


class TestBellPowerLower:
    def test_mu_one_is_bell(self):
        assert abs(bell_power_lower(5, 1) - 52) < mpmath.mpf("1e-27")

    def test_examples(self):
        # B_{6/2}^2 = 25 and B_{4/2}^2 = 4
        assert abs(bell_power_lower(6, 2) - 25) < mpmath.mpf("1e-27")
        assert abs(bell_power_lower(4, 2) - 4) < mpmath.mpf("1e-27")

    @pytest.mark.parametrize("mu", [1, 2, 3, 5])
    def test_below_normalized_poisson_moment(self, mu):
        for k in range(1, 25):
            normalized = poisson_raw_moment(mu, k) / mu**k
            assert bell_power_lower(k, mu) <= mpmath.mpf(normalized.numerator) / normalized.denominator * (
                1 + mpmath.mpf("1e-28")
            )

    def test_log_form(self):
        assert abs(log_bell_power_lower(6, 2) - 2 * mpmath.log(5)) < mpmath.mpf("1e-28")

    @pytest.mark.parametrize("mu", [0, "1.5", True, -2])
    def test_integer_mu_required(self, mu):
        with pytest.raises(ValueError):
            log_bell_power_lower(3, mu)
