from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from metabelian.endo import Endomorphism, cubic
from metabelian.errors import ParseError
from metabelian.fieldpoly import Field, Ring, format_poly
from metabelian.magnus import MagnusElement, bracket, eval_lie_expr, module_scale
from metabelian.parse import (format_endomorphism, parse_element, parse_endomorphism, parse_expression,
                              parse_lie_expr, parse_poly)
from strategies import elements, polys, rings

R = Ring(4)
y1, y2, y3, y4 = R.gens()
x1, x2, x3, x4 = (MagnusElement.generator(R, i) for i in range(1, 5))


def test_module_action_syntax():
    assert parse_element("[x2,x3]*y1^2*y4", R) == module_scale(bracket(x2, x3), y1 ** 2 * y4)
    assert parse_element("y1^2*y4*[x2,x3]", R) == module_scale(bracket(x2, x3), y1 ** 2 * y4)


def test_cubic_image():
    assert parse_element("x1 + [[x2,x3],x1]", R) == cubic(R).images[0]


def test_polynomials_and_scalars():
    assert parse_poly("3*y1^2*y4 - 1/2*y2 + 7", R) == 3 * y1 ** 2 * y4 - Fraction(1, 2) * y2 + 7
    assert parse_expression("2/4", R) == Fraction(1, 2)
    assert parse_poly("(y1 + y2)^2", R) == y1 ** 2 + 2 * y1 * y2 + y2 ** 2
    assert parse_poly("1/2*y1", Ring(4, Field.gf(5))) == 3 * Ring(4, Field.gf(5)).var(1)


def test_lie_expression_tree_is_ring_independent():
    e = parse_lie_expr("[[x2,x3],x1]*y4 - 2*x1")
    for ring in (Ring(4), Ring(5, Field.gf(3))):
        assert eval_lie_expr(e, ring) == parse_element("[[x2,x3],x1]*y4 - 2*x1", ring)


@pytest.mark.parametrize("text, line, column, fragment", [
    ("[x1,x2", 1, 7, "end of input"),
    ("x1 + + ", 1, 8, "operand"),
    ("x1 * x2", 1, 4, "two Lie elements"),
    ("x5", 1, 1, "out of range"),
    ("x1 + y1", 1, 6, "polynomial"),
    ("x1 $ x2", 1, 4, "unexpected character"),
])
def test_errors_carry_positions(text, line, column, fragment):
    with pytest.raises(ParseError) as err:
        parse_element(text, R)
    assert (err.value.line, err.value.column) == (line, column)
    assert fragment in str(err.value)


def test_endomorphism_syntax():
    phi = parse_endomorphism("x1 -> x1 + [[x2,x3],x1]", R)
    assert phi == cubic(R)
    psi = parse_endomorphism("x2 -> x3\nx3 -> x2; x1 -> -x1", R)
    assert psi.images == (-x1, x3, x2, x4)
    with pytest.raises(ParseError) as err:
        parse_endomorphism("x1 -> x2\nx1 -> x3", R)
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_endomorphism("x1 -> ", R)
    with pytest.raises(ParseError):
        parse_endomorphism("", R)


@given(st.data())
def test_poly_round_trip(data):
    ring = data.draw(rings())
    p = data.draw(polys(ring, 4, 5))
    assert parse_poly(format_poly(p), ring) == p


@given(st.data())
def test_element_round_trip(data):
    ring = data.draw(rings())
    f = data.draw(elements(ring, 4))
    assert parse_element(str(f), ring) == f


@given(st.data())
def test_endomorphism_round_trip(data):
    ring = data.draw(rings((4, 5)))
    phi = Endomorphism(ring, [data.draw(elements(ring, 2)) for _ in range(ring.n)])
    assert parse_endomorphism(format_endomorphism(phi), ring) == phi
