import math
from fractions import Fraction

import pytest
from hypothesis import given

from metabelian.errors import DimensionError, DomainError
from metabelian.fieldpoly import Field, Ring, format_poly, poly_arith, poly_degrees, poly_split_by_variable
from strategies import polys, ring_and

QQ = Field.rationals()
R4 = Ring(4)
y1, y2, y3, y4 = R4.gens()


def test_field_parse_and_characteristic():
    assert Field.parse("q").characteristic() == 0
    assert Field.parse("gf:7").characteristic() == 7
    assert Field.parse("GF:2").spec() == "gf:2"
    with pytest.raises(DomainError):
        Field.parse("gf:6")
    with pytest.raises(DomainError):
        Field.parse("reals")


def test_scalars_are_canonical():
    assert QQ(Fraction(6, -4)) == Fraction(-3, 2)
    assert Field.gf(5)(-1) == 4
    assert Field.gf(5).inv(2) == 3
    with pytest.raises(ZeroDivisionError):
        Field.gf(5).inv(0)


def test_difference_of_squares():
    assert (y1 + y2) * (y1 - y2) == y1 ** 2 - y2 ** 2
    assert poly_arith(y1 + y2, y1 - y2, "mul") == y1 ** 2 - y2 ** 2


def test_additive_identity():
    p = 3 * y1 ** 2 * y4 - y2
    assert p + R4.zero == p


def test_frobenius_in_characteristic_two():
    R = Ring(4, Field.gf(2))
    a, _, _, d = R.gens()
    assert (a + d) ** 2 == a ** 2 + d ** 2


def test_mismatched_rings_rejected():
    with pytest.raises(DimensionError):
        y1 + Ring(5).var(1)
    with pytest.raises(DimensionError):
        y1 * Ring(4, Field.gf(3)).var(1)


def test_substitute_examples():
    assert (y1 ** 2).substitute([y1 + y4, y2, y3, y4]) == y1 ** 2 + 2 * y1 * y4 + y4 ** 2
    p = 2 * y1 * y3 ** 2 - y4
    assert p.substitute(list(R4.gens())) == p
    # shifting y3 by y4, hand-expanded
    shift = [y1, y2, y3 + y4, y4]
    assert (y1 * y3).substitute(shift) == y1 * y3 + y1 * y4
    assert (y3 ** 2 * y2).substitute(shift) == y2 * y3 ** 2 + 2 * y2 * y3 * y4 + y2 * y4 ** 2
    assert (y1 * y2).substitute(shift) == y1 * y2


def test_degrees():
    assert poly_degrees(R4.zero) == (math.inf, -math.inf)
    assert poly_degrees(y1 ** 2 * y4 + y2) == (1, 3)
    assert poly_degrees(R4.const(7)) == (0, 0)


def test_split_by_variable_examples():
    assert poly_split_by_variable(y1 * y3 + y2, 3) == (y1, y2)
    assert poly_split_by_variable(y2 ** 2, 1) == (R4.zero, y2 ** 2)
    b, a0 = y1 * y2 + 1, y3 ** 2
    assert poly_split_by_variable(-y4 * b + a0, 4) == (-b, a0)


def test_grlex_print_order():
    assert format_poly(y2 + y1 ** 2 + 3 + y1 * y4) == "y1^2 + y1*y4 + y2 + 3"
    assert format_poly(Fraction(-1, 2) * y2) == "-1/2*y2"


def test_exact_division():
    p = (y1 + y2) * (y3 - 2 * y4)
    assert p.exact_div(y1 + y2) == y3 - 2 * y4
    with pytest.raises(DomainError):
        (y1 + 1).exact_div(y2)


@given(ring_and(polys, polys, polys))
def test_ring_axioms(case):
    _, p, q, r = case
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p - p == p.ring.zero


@given(ring_and(polys, polys, lambda R: polys(R, 2, 2), ns=(4, 5)))
def test_substitute_is_a_homomorphism(case):
    ring, p, q, shift = case
    images = [v + shift for v in ring.gens()]
    assert (p * q).substitute(images) == p.substitute(images) * q.substitute(images)
    assert (p + q).substitute(images) == p.substitute(images) + q.substitute(images)


@given(ring_and(polys))
def test_split_round_trip(case):
    ring, p = case
    for i in range(1, ring.n + 1):
        q, r = p.split_by_variable(i)
        assert ring.var(i) * q + r == p
        assert all(e[i - 1] == 0 for e in r.terms)


@given(ring_and(polys, polys))
def test_degrees_are_additive(case):
    _, p, q = case
    if p and q:
        assert (p * q).ldeg == p.ldeg + q.ldeg
        assert (p * q).deg == p.deg + q.deg


def test_exponent_bound_is_checked():
    big = y1 ** 600000
    with pytest.raises(DomainError):
        big * big
