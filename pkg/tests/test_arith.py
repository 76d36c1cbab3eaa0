from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from torsred.arith import (
    INF,
    QuadraticField,
    element_from_json,
    element_to_json,
    format_rational,
    quad_val,
    residue_reduce,
    splitting_type,
    val_p,
)
from torsred.errors import TorsredError, UnsupportedPrimeError

PRIMES = [5, 7, 11, 13]

rationals = st.fractions().filter(lambda x: x != 0)
small_rationals = st.builds(
    Fraction, st.integers(-10**6, 10**6), st.integers(1, 10**6)
)


def factor_oracle(x: Fraction, p: int) -> int:
    return sympy.factorint(x.numerator).get(p, 0) - sympy.factorint(x.denominator).get(p, 0)


@pytest.mark.parametrize(
    "x, p, expected",
    [(Fraction(-6075), 5, 2), (Fraction(1), 7, 0), (Fraction(49, 3), 7, 2), (Fraction(3, 250), 5, -3)],
)
def test_val_p_examples(x, p, expected):
    assert val_p(x, p) == expected
    assert factor_oracle(x, p) == expected


def test_val_p_zero_is_infinite():
    assert val_p(0, 5) == INF


@settings(max_examples=1000, deadline=None)
@given(small_rationals, small_rationals, st.sampled_from(PRIMES))
def test_val_p_is_a_valuation(x, y, p):
    assert val_p(x * y, p) == val_p(x, p) + val_p(y, p)
    vs = val_p(x + y, p)
    assert vs >= min(val_p(x, p), val_p(y, p))
    if val_p(x, p) != val_p(y, p):
        assert vs == min(val_p(x, p), val_p(y, p))


def root_count_oracle(p1: int, p0: int, p: int) -> str:
    roots = [r for r in range(p) if (r * r + p1 * r + p0) % p == 0]
    if len(roots) == 1:
        return "ramified"
    return "split" if len(roots) == 2 else "inert"


@pytest.mark.parametrize(
    "p1, p0, p, expected",
    [(-1, -448, 11, "ramified"), (0, 1, 7, "inert"), (0, 1, 5, "split")],
)
def test_splitting_type_examples(p1, p0, p, expected):
    assert splitting_type(QuadraticField(p1, p0), p) == expected
    assert root_count_oracle(p1, p0, p) == expected


@settings(max_examples=300, deadline=None)
@given(st.integers(-200, 200), st.integers(-200, 200), st.sampled_from(PRIMES))
def test_splitting_type_matches_root_count(p1, p0, p):
    d = p1 * p1 - 4 * p0
    if sympy.sqrt(d).is_rational if d >= 0 else False:
        return
    disc_v = val_p(d, p)
    if disc_v >= 2:  # non-maximal at p: root count mod p is not the splitting
        return
    assert splitting_type(QuadraticField(p1, p0), p) == root_count_oracle(p1, p0, p)


def test_splitting_type_rejects_p2_and_bad_denominators():
    K = QuadraticField(0, 1)
    with pytest.raises(UnsupportedPrimeError):
        splitting_type(K, 2)
    with pytest.raises(UnsupportedPrimeError):
        splitting_type(QuadraticField(Fraction(1, 5), 1), 5)


def test_reducible_minpoly_rejected():
    with pytest.raises(TorsredError):
        QuadraticField(0, -4)


K448 = QuadraticField(-1, -448)


def test_quad_val_examples():
    theta = K448.gen
    assert (2 * theta - 1).norm() == -1793
    assert quad_val(2 * theta - 1, 11) == 1
    assert quad_val(K448(11), 11) == 2
    assert quad_val(theta, 11) == 0
    assert quad_val(K448(0), 11) == INF


def test_quad_val_inert_and_split():
    K = QuadraticField(0, 1)  # x^2 + 1
    assert quad_val(K(7), 7) == 1
    assert quad_val(K(49, 7), 7) == 1
    with pytest.raises(UnsupportedPrimeError, match="ambiguous prime"):
        quad_val(K(1, 1), 5)


elements = st.builds(lambda a, b: K448(a, b), small_rationals, small_rationals)


@settings(max_examples=500, deadline=None)
@given(elements, elements)
def test_quad_val_multiplicative(a, b):
    assert quad_val(a * b, 11) == quad_val(a, 11) + quad_val(b, 11)


@settings(max_examples=200, deadline=None)
@given(small_rationals)
def test_quad_val_on_rationals(x):
    assert quad_val(K448(x), 11) == 2 * val_p(x, 11)
    assert quad_val(QuadraticField(0, 1)(x), 7) == val_p(x, 7)


def test_field_arithmetic():
    theta = K448.gen
    assert theta * theta == theta + 448
    a = 3 * theta - Fraction(1, 2)
    assert a * a.inverse() == 1
    assert a / a == 1
    assert (a + 1) - 1 == a
    assert a.trace() == a + a.conjugate()
    assert a.norm() == (a * a.conjugate()).a


def test_residue_reduce_examples():
    theta = K448.gen
    assert residue_reduce(theta, 11) == 6
    assert residue_reduce(K448(3), 11) == 3
    assert residue_reduce(11 * theta, 11) == 0
    with pytest.raises(UnsupportedPrimeError, match="unsupported"):
        residue_reduce(QuadraticField(0, 1)(3), 7)
    with pytest.raises(TorsredError):
        residue_reduce(theta / 11, 11)


integral = st.builds(lambda a, b: K448(a, b), st.integers(-10**4, 10**4), st.integers(-10**4, 10**4))


@settings(max_examples=300, deadline=None)
@given(integral, integral)
def test_residue_reduce_is_ring_homomorphism(a, b):
    p = 11
    assert residue_reduce(a + b, p) == (residue_reduce(a, p) + residue_reduce(b, p)) % p
    assert residue_reduce(a * b, p) == (residue_reduce(a, p) * residue_reduce(b, p)) % p


def test_residue_of_nonintegral_coordinates():
    # (theta - 1/2)^2 = 1793/4 has valuation 2 > 0 despite the 1/2
    pi = K448.gen - Fraction(1, 2)
    assert quad_val(pi, 11) == 1
    assert residue_reduce(pi * pi / 11, 11) == (Fraction(1793, 44).numerator * pow(4, -1, 11)) % 11


def test_serialization_roundtrip():
    assert format_rational(Fraction(-3, 4)) == "-3/4"
    assert format_rational(5) == "5"
    a = K448(Fraction(1, 3), -2)
    assert element_from_json(element_to_json(a)) == a
    assert element_to_json(a) == {"a": "1/3", "b": "-2", "minpoly": ["-1", "-448"]}
    assert element_from_json("7/2") == Fraction(7, 2)
    with pytest.raises(TorsredError):
        element_from_json("seven")
