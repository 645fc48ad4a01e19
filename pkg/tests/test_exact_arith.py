from fractions import Fraction
from math import comb, gcd, prod

import pytest
from hypothesis import given, strategies as st

from congrlab.errors import FactorOverflow, NotCoprime, ZeroInput
from congrlab.exact_arith import (
    bernoulli,
    factor,
    is_prime,
    largest_prime_factor,
    multiplicative_order,
    prime_pi,
    primes_upto,
    rational_valuation,
    reduced_numerator,
    sigma,
    valuation,
)


def akiyama_tanigawa(n):
    # gives B_n with B_1 = +1/2; even indices agree with any convention
    a = [Fraction(1, j + 1) for j in range(n + 1)]
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def divisor_sum(m, n):
    return sum(d**m for d in range(1, n + 1) if n % d == 0)


def naive_is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


def test_bernoulli_examples():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert bernoulli(6) == Fraction(1, 42)
    assert bernoulli(7) == 0


@pytest.mark.parametrize("k", range(0, 41, 2))
def test_bernoulli_matches_akiyama_tanigawa(k):
    assert bernoulli(k) == akiyama_tanigawa(k)


def test_bernoulli_recurrence_holds():
    for k in range(1, 30):
        assert sum(comb(k + 1, j) * bernoulli(j) for j in range(k + 1)) == 0


@pytest.mark.parametrize("k", range(2, 61, 2))
def test_von_staudt_clausen_denominator(k):
    expected = prod(p for p in range(2, k + 2) if naive_is_prime(p) and k % (p - 1) == 0)
    assert bernoulli(k).denominator == expected


def test_bernoulli_large_index_no_recursion_error():
    assert bernoulli(600).denominator == prod(
        p for p in range(2, 602) if naive_is_prime(p) and 600 % (p - 1) == 0
    )


def test_reduced_numerator():
    assert reduced_numerator(Fraction(95, 36)) == 95
    assert reduced_numerator(Fraction(1330, 504)) == 95
    assert reduced_numerator(Fraction(-17, 480)) == 17
    assert reduced_numerator(bernoulli(8) / 16 * 17) == 17
    with pytest.raises(ZeroInput):
        reduced_numerator(Fraction(0))


def test_sigma_examples():
    assert sigma(11, 1) == 1
    assert sigma(7, 2) == 129
    assert sigma(3, 6) == 252
    assert sigma(0, 12) == 6


@given(st.integers(1, 10**4), st.integers(1, 10**4), st.integers(0, 12))
def test_sigma_multiplicative(a, b, m):
    if gcd(a, b) == 1:
        assert sigma(m, a * b) == sigma(m, a) * sigma(m, b)


@given(st.integers(1, 3000), st.integers(0, 6))
def test_sigma_matches_enumeration(n, m):
    assert sigma(m, n) == divisor_sum(m, n)


def test_largest_prime_factor():
    assert largest_prime_factor(1) == 1
    assert largest_prime_factor(288) == 3
    assert largest_prime_factor(120) == 5
    assert largest_prime_factor(2 * 10**9 + 11) == 2 * 10**9 + 11


def test_valuations():
    assert valuation(2, 48) == 4
    assert rational_valuation(5, Fraction(3, 25)) == -2
    assert rational_valuation(5, Fraction(0)) is None
    with pytest.raises(ZeroInput):
        valuation(3, 0)


def test_multiplicative_order_examples():
    assert multiplicative_order(1, 37) == 1
    assert multiplicative_order(11, 37) == 6
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(3, 10) == 4
    with pytest.raises(NotCoprime):
        multiplicative_order(6, 9)


def test_multiplicative_order_divides_group_order():
    for ell in primes_upto(1000):
        ell = int(ell)
        if ell < 3:
            continue
        for a in (2, 3, ell - 1, ell // 2 + 1):
            if a % ell:
                t = multiplicative_order(a, ell)
                assert (ell - 1) % t == 0 and pow(a, t, ell) == 1


@given(st.integers(2, 500), st.integers(1, 10**6))
def test_multiplicative_order_is_minimal(m, a):
    if gcd(a, m) == 1:
        t = multiplicative_order(a, m)
        assert pow(a, t, m) == 1 % m
        assert all(pow(a, s, m) != 1 for s in range(1, t))


def test_factor_examples():
    assert factor(1) == []
    assert factor(159600) == [(2, 4), (3, 1), (5, 2), (7, 1), (19, 1)]
    assert factor(625355) == [(5, 1), (181, 1), (691, 1)]


def test_factor_reconstructs_exhaustively():
    for n in range(1, 10**6 + 1, 1):
        f = factor(n)
        if n % 9973 == 0 or n < 2000:
            assert all(naive_is_prime(p) for p, _ in f)
        assert prod(p**e for p, e in f) == n


@given(st.integers(1, 2**64))
def test_factor_64bit(n):
    f = factor(n)
    assert prod(p**e for p, e in f) == n
    assert [p for p, _ in f] == sorted({p for p, _ in f})
    assert all(is_prime(p) for p, _ in f)


def test_factor_large_semiprime_and_overflow():
    p, q = 1000000007, 998244353
    assert factor(p * q * 1000003) == [(1000003, 1), (q, 1), (p, 1)]
    with pytest.raises(FactorOverflow):
        factor(4 * 10**30 + 1)


def test_is_prime_agrees_with_trial_division():
    for n in range(-5, 5000):
        assert is_prime(n) == naive_is_prime(n)


def test_primes_upto_and_pi():
    assert list(primes_upto(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert prime_pi(10**6) == 78498
    assert prime_pi(1.5) == 0
