import threading
from math import comb
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subpoisson.exact_moments import (
    BernoulliSum,
    Binomial,
    DomainError,
    Poisson,
    SizeError,
    StirlingTable,
    as_fraction,
    bell_number,
    bernoulli_sum_raw_moment,
    binomial_factorial_moment,
    binomial_raw_moment,
    falling_factorial,
    normalized_moment,
    poisson_raw_moment,
    stirling2,
)

from oracles import (
    bell_by_recurrence,
    bernoulli_sum_moment_by_enumeration,
    binomial_pmf_moment,
    stirling2_by_enumeration,
)

probs = st.fractions(min_value=Fraction(1, 1000), max_value=1, max_denominator=1000).filter(lambda p: p > 0)


class TestStirling:
    def test_base_case(self):
        assert stirling2(0, 0) == 1

    @pytest.mark.parametrize("k,i,expected", [(3, 2, 3), (4, 2, 7)])
    def test_examples(self, k, i, expected):
        assert stirling2(k, i) == expected
        assert stirling2_by_enumeration(k, i) == expected

    @pytest.mark.parametrize("k", range(0, 8))
    def test_matches_partition_enumeration(self, k):
        for i in range(k + 1):
            assert stirling2(k, i) == stirling2_by_enumeration(k, i)

    def test_i_greater_than_k(self):
        with pytest.raises(DomainError):
            stirling2(2, 3)

    def test_table_invariants(self):
        t = StirlingTable(40)
        for k in range(1, 41):
            assert t(k, 0) == 0
            assert t(k, k) == 1
            for i in range(1, k):
                assert t(k, i) == i * t(k - 1, i) + t(k - 1, i - 1)
            assert sum(t.row(k)) == bell_by_recurrence(k)

    def test_table_grows_on_demand(self):
        t = StirlingTable(4)
        assert t(70, 1) == 1
        assert t.max_k >= 70

    def test_concurrent_extension_is_consistent(self):
        t = StirlingTable(2)
        errors = []

        def reader(k):
            try:
                assert sum(t.row(k)) == bell_by_recurrence(k)
            except AssertionError as exc:
                errors.append(exc)

        threads = [threading.Thread(target=reader, args=(k,)) for k in range(5, 60, 3)]
        for th in threads:
            th.start()
        for th in threads:
            th.join()
        assert not errors


class TestFallingFactorial:
    def test_examples(self):
        assert falling_factorial(5, 3) == 60
        assert falling_factorial(17, 0) == 1
        assert falling_factorial(3, 5) == 0


class TestBinomial:
    def test_small(self):
        assert binomial_raw_moment(2, Fraction(1, 2), 2) == Fraction(3, 2)

    def test_ten_three_tenths_fourth(self):
        assert binomial_raw_moment(10, Fraction(3, 10), 4) == binomial_pmf_moment(10, Fraction(3, 10), 4)
        assert binomial_raw_moment(10, Fraction(3, 10), 4) == Fraction(54291, 250)

    @given(st.integers(1, 30), probs)
    def test_first_moment_is_mean(self, n, p):
        assert binomial_raw_moment(n, p, 1) == n * p

    @given(st.integers(1, 30), probs)
    def test_zeroth_moment(self, n, p):
        assert binomial_raw_moment(n, p, 0) == 1

    @settings(max_examples=60)
    @given(st.integers(1, 12), probs, st.integers(0, 10))
    def test_matches_pmf(self, n, p, k):
        assert binomial_raw_moment(n, p, k) == binomial_pmf_moment(n, p, k)

    @given(st.integers(1, 25), probs, st.integers(1, 15))
    def test_jensen(self, n, p, k):
        assert binomial_raw_moment(n, p, k) >= (n * p) ** k

    def test_factorial_moment(self):
        assert binomial_factorial_moment(5, Fraction(1, 2), 2) == 5
        assert binomial_factorial_moment(9, Fraction(1, 3), 0) == 1
        assert binomial_factorial_moment(3, 1, 3) == 6

    def test_factorial_moment_against_pmf(self):
        n, p = 7, Fraction(2, 5)
        for k in range(0, 9):
            brute = sum(falling_factorial(x, k) * comb(n, x) * p**x * (1 - p) ** (n - x) for x in range(n + 1))
            assert binomial_factorial_moment(n, p, k) == brute

    @pytest.mark.parametrize("p", [Fraction(0), Fraction(11, 10), Fraction(-1, 2)])
    def test_bad_probability(self, p):
        with pytest.raises(DomainError):
            binomial_raw_moment(3, p, 2)

    def test_degenerate(self):
        assert binomial_raw_moment(3, 1, 4) == 81


class TestPoisson:
    @pytest.mark.parametrize("k", range(0, 21))
    def test_unit_mean_is_bell(self, k):
        assert poisson_raw_moment(1, k) == bell_number(k) == bell_by_recurrence(k)

    def test_examples(self):
        assert poisson_raw_moment(1, 4) == 15
        assert poisson_raw_moment(2, 3) == 22
        assert poisson_raw_moment(Fraction(7, 3), 1) == Fraction(7, 3)

    def test_two_sixth(self):
        # sum_i S(6, i) 2^i with row 1, 31, 90, 65, 15, 1
        assert poisson_raw_moment(2, 6) == 2 + 31 * 4 + 90 * 8 + 65 * 16 + 15 * 32 + 64 == 2430

    def test_bad_mean(self):
        with pytest.raises(DomainError):
            poisson_raw_moment(0, 2)

    @given(st.fractions(min_value=1, max_value=50, max_denominator=20), st.integers(1, 25))
    def test_monotone_in_k_for_mean_at_least_one(self, mu, k):
        assert poisson_raw_moment(mu, k + 1) >= poisson_raw_moment(mu, k)


class TestBernoulliSum:
    def test_examples(self):
        assert bernoulli_sum_raw_moment([Fraction(1, 2)], 2) == Fraction(1, 2)
        assert bernoulli_sum_raw_moment([Fraction(1, 2)] * 2, 2) == Fraction(3, 2)
        assert bernoulli_sum_raw_moment([1, 1], 3) == 8

    @settings(max_examples=40)
    @given(st.lists(probs, min_size=1, max_size=8), st.integers(0, 8))
    def test_matches_enumeration(self, ps, k):
        assert bernoulli_sum_raw_moment(ps, k) == bernoulli_sum_moment_by_enumeration(ps, k)

    @given(st.integers(1, 15), probs, st.integers(0, 10))
    def test_equal_probs_match_binomial(self, n, p, k):
        assert bernoulli_sum_raw_moment([p] * n, k) == binomial_raw_moment(n, p, k)

    def test_cap(self):
        with pytest.raises(SizeError):
            bernoulli_sum_raw_moment([Fraction(1, 2)] * 21, 2)
        assert bernoulli_sum_raw_moment([Fraction(1, 2)] * 30, 1, cap=30) == 15


class TestDistributions:
    def test_means(self):
        assert Poisson(Fraction(3, 2)).mean() == Fraction(3, 2)
        assert Binomial(10, "0.3").mean() == 3
        assert BernoulliSum(("1/3", "2/3")).mean() == 1

    def test_normalized(self):
        assert normalized_moment(Binomial(10, Fraction(1, 2)), 2) == Fraction(27.5) / 25

    def test_decimal_strings_are_exact(self):
        assert as_fraction("0.3") == Fraction(3, 10)
        with pytest.raises(TypeError):
            as_fraction(0.3)

    def test_invalid(self):
        with pytest.raises(DomainError):
            Binomial(0, Fraction(1, 2))
        with pytest.raises(DomainError):
            BernoulliSum(())
