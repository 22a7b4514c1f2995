"""Magnus coordinates, Fox columns, lifting and the right-normed basis."""

import math

import pytest
from hypothesis import given

from metabelian.errors import DomainError, NotADerivativeError
from metabelian.fieldpoly import Field, Ring
from metabelian.magnus import (Bracket, Gen, MagnusElement, bracket, element_degrees, eval_basis, eval_lie_expr,
                               fox_derivatives, lift_column, module_scale, to_basis)
from strategies import commutators, elements, ring_and

R = Ring(4)
y1, y2, y3, y4 = R.gens()
Z = R.zero
x1, x2, x3, x4 = (MagnusElement.generator(R, i) for i in range(1, 5))


def test_generator_coordinates():
    assert x1.linear == (1, 0, 0, 0)
    assert x1.module == (R.one, Z, Z, Z)


def test_bracket_of_generators():
    c = bracket(x1, x2)
    assert c.linear == (0, 0, 0, 0)
    assert c.module == (y2, -y1, Z, Z)


def test_right_normed_cubic():
    e = eval_lie_expr(Bracket(Bracket(Gen(2), Gen(3)), Gen(1)), R)
    assert e.module == (Z, y1 * y3, -y1 * y2, Z)


def test_bracket_examples():
    assert not bracket(x3, x3)
    assert not bracket(bracket(x1, x2), bracket(x3, x4))


def test_module_scale():
    c = bracket(x1, x2)
    assert module_scale(c, R.one) == c
    assert module_scale(bracket(x2, x3), y1) == bracket(bracket(x2, x3), x1)
    with pytest.raises(DomainError):
        module_scale(x1, y2)


def test_fox_examples():
    assert fox_derivatives(x3).entries == (Z, Z, R.one, Z)
    assert fox_derivatives(bracket(x1, x2)).entries == (y2, -y1, Z, Z)
    assert fox_derivatives(bracket(bracket(x2, x3), x1)).entries == (Z, y1 * y3, -y1 * y2, Z)


def test_lift_examples():
    assert not lift_column([Z] * 4)
    assert lift_column([y2, -y1, Z, Z]) == bracket(x1, x2)
    with pytest.raises(NotADerivativeError):
        lift_column([y2, Z, Z, Z])


def test_membership_is_checked():
    with pytest.raises(DomainError):
        MagnusElement(R, [0] * 4, [y2, Z, Z, Z])


def test_to_basis_examples():
    assert str(to_basis(bracket(x1, x2))) == "-[x2,x1]"
    # sign fixed by comparing Fox columns of both sides
    bc = to_basis(bracket(x1, bracket(x2, x3)))
    assert str(bc) == "[[x3,x1],x2] - [[x2,x1],x3]"
    assert eval_basis(bc) == bracket(x1, bracket(x2, x3))


def test_element_degrees():
    assert element_degrees(x1) == (1, 1)
    assert element_degrees(bracket(bracket(x2, x3), x1)) == (3, 3)
    assert element_degrees(MagnusElement.zero(R)) == (math.inf, -math.inf)


@given(ring_and(elements, elements, elements))
def test_lie_identities(case):
    _, u, v, w = case
    assert not (bracket(u, v) + bracket(v, u))
    assert not (bracket(bracket(u, v), w) + bracket(bracket(v, w), u) + bracket(bracket(w, u), v))
    assert not bracket(bracket(u, v), bracket(w, u))


@given(ring_and(commutators))
def test_lift_inverts_fox(case):
    ring, f = case
    col = fox_derivatives(f)
    assert col.is_derivative()
    assert lift_column(col) == f


@given(ring_and(lambda r: elements(r, 4)))
def test_basis_round_trip(case):
    _, f = case
    assert eval_basis(to_basis(f)) == f


def test_jacobi_split_holds_in_normal_form():
    for n in (4, 5):
        ring = Ring(n, Field.gf(3))
        y = ring.gens()
        for i1 in range(1, 4):
            for i_n in range(1, 4):
                base = y[0] ** i1 * y[n - 1] ** (i_n - 1)
                lhs = MagnusElement.commutator(ring, 2, 3, base * y[n - 1])
                rhs = MagnusElement.commutator(ring, 2, n, base * y[2]) + MagnusElement.commutator(ring, n, 3, base * y[1])
                assert str(to_basis(lhs)) == str(to_basis(rhs))
                assert lhs == rhs
