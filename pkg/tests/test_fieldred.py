from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from congrlab.errors import BadParameters, DenominatorNotInvertible, MismatchedField, UnsupportedDegree
from congrlab.exact_arith import primes_upto
from congrlab.fieldred import (
    NumberField,
    PrimeIdealFactor,
    factor_minpoly_mod,
    generator_vanishes,
    poly_mod_ell,
    poly_mul,
    reduce_element,
    reduce_rational,
    residue_equal,
)

M1 = (188, -90, 0, 1)  # x^3 - 90x + 188
M2 = (225104, -2854, -77, 1)
K1 = NumberField(M1)


def is_irreducible(g, ell):
    d = len(g) - 1
    if d == 1:
        return True
    if any(sum(c * pow(x, i, ell) for i, c in enumerate(g)) % ell == 0 for x in range(ell)):
        return False
    if d <= 3:
        return True
    # degree 4 without roots: check quadratic divisors
    from congrlab.fieldred import poly_divmod

    return all(poly_divmod(g, (c, b, 1), ell)[1] != (0,) for b in range(ell) for c in range(ell))


def test_factor_ex1_minpoly_mod5():
    fs = factor_minpoly_mod(M1, 5)
    assert [(f.g, f.residue_degree, f.multiplicity) for f in fs] == [((2, 1), 1, 1), ((4, 3, 1), 2, 1)]
    assert fs[0].describe() == "(5, x + 2)"


def test_factor_ex1_minpoly_mod19_ramified():
    fs = factor_minpoly_mod(M1, 19)
    assert sorted(f.multiplicity for f in fs) == [1, 2]
    assert all(f.residue_degree == 1 for f in fs)


def test_factor_trivial_and_errors():
    assert factor_minpoly_mod((-1, 1), 7) == [PrimeIdealFactor(7, (6, 1), 1, 1)]
    with pytest.raises(UnsupportedDegree):
        factor_minpoly_mod((1, 0, 0, 0, 0, 1), 7)
    with pytest.raises(BadParameters):
        factor_minpoly_mod((1, 2), 7)


def test_factor_quartic_splits_into_quadratics():
    # (x^2 + 2)(x^2 + 3) over F_5, both irreducible
    m = poly_mul((2, 0, 1), (3, 0, 1), 5)
    fs = factor_minpoly_mod(m, 5)
    assert [f.g for f in fs] == [(2, 0, 1), (3, 0, 1)]
    sq = factor_minpoly_mod(poly_mul((2, 0, 1), (2, 0, 1), 5), 5)
    assert [(f.g, f.multiplicity) for f in sq] == [((2, 0, 1), 2)]


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=4), st.sampled_from([int(p) for p in primes_upto(60)]))
def test_factorization_reconstructs(lower, ell):
    m = tuple(lower) + (1,)
    fs = factor_minpoly_mod(m, ell)
    assert sum(f.residue_degree * f.multiplicity for f in fs) == len(m) - 1
    acc = (1,)
    for f in fs:
        assert is_irreducible(f.g, ell)
        for _ in range(f.multiplicity):
            acc = poly_mul(acc, f.g, ell)
    assert acc == poly_mod_ell(m, ell)


def test_reduce_element_examples():
    lam = factor_minpoly_mod(M1, 5)[0]
    assert reduce_element(K1.gen(), lam).poly == (3,)
    e = -(K1([Fraction(-64, 3), Fraction(5, 3), Fraction(1, 6)]))
    assert reduce_element(e, lam).poly == (4,)
    assert reduce_element(K1.zero(), lam).is_zero()
    with pytest.raises(DenominatorNotInvertible):
        reduce_element(K1([Fraction(1, 5)]), lam)
    assert reduce_rational(Fraction(1, 6), 5) == 1


def test_residue_equal():
    lam = factor_minpoly_mod(M1, 5)[0]
    three, four = reduce_element(Fraction(3), lam), reduce_element(Fraction(4), lam)
    assert residue_equal(three, three)
    assert not residue_equal(three, four)
    # a_g(2) = a against 1 + 2^5 at (5, x - 3)
    assert residue_equal(reduce_element(K1.gen(), lam), reduce_element(Fraction(33), lam))
    other = factor_minpoly_mod(M1, 19)[0]
    with pytest.raises(MismatchedField):
        residue_equal(three, reduce_element(Fraction(3), other))


def test_generator_diagnostic_ex1():
    # lambda' = (5, 1/6 a^2 + 2/3 a - 28/3) sits at the linear factor x - 3
    h = K1([Fraction(-28, 3), Fraction(2, 3), Fraction(1, 6)])
    lin, quad = factor_minpoly_mod(M1, 5)
    assert generator_vanishes(h, lin)
    assert not generator_vanishes(h, quad)


def test_number_field_arithmetic():
    a = K1.gen()
    assert a * a * a == 90 * a - 188
    assert (a + 1) - a == K1.one()
    assert K1([1, 2]) * Fraction(1, 2) == K1([Fraction(1, 2), 1])
    with pytest.raises(MismatchedField):
        a + NumberField(M2).gen()
    with pytest.raises(BadParameters):
        NumberField((1, 2))


elements = st.lists(
    st.fractions(min_value=-50, max_value=50, max_denominator=42).filter(lambda q: q.denominator % 19 and q.denominator % 5),
    min_size=3,
    max_size=3,
)


@given(elements, elements, st.sampled_from([5, 19]))
def test_reduction_is_ring_homomorphism(c1, c2, ell):
    e1, e2 = K1(c1), K1(c2)
    for ideal in factor_minpoly_mod(M1, ell):
        r1, r2 = reduce_element(e1, ideal), reduce_element(e2, ideal)
        assert residue_equal(reduce_element(e1 + e2, ideal), r1 + r2)
        assert residue_equal(reduce_element(e1 * e2, ideal), r1 * r2)
