import math

import pytest
from hypothesis import given, strategies as st

from metabelian.endo import (Endomorphism, LinearMap, PolyMatrix, a_map, apply, chein_C, commutator, compose,
                             conjugate, cubic, d_map, elementary, endo_degrees, exponential_E, invert,
                             is_automorphism, is_chein_valid, is_one_row, jacobian, jacobian_det, one_row,
                             quadratic, transposition)
from metabelian.errors import DomainError, NotAnAutomorphismError
from metabelian.fieldpoly import Field, Ring
from metabelian.magnus import MagnusElement, bracket, fox_derivatives
from strategies import commutators, polys, rings

R = Ring(4)
y1, y2, y3, y4 = R.gens()
x1, x2, x3, x4 = (MagnusElement.generator(R, i) for i in range(1, 5))
ID = Endomorphism.identity(R)


def com(i, j, a=None, ring=R):
    return MagnusElement.commutator(ring, i, j, a)


def bad_map():
    return Endomorphism(R, [x1 + bracket(x2, x1), x2, x3, x4])


def test_apply_examples():
    g = bracket(bracket(x2, x3), x1)
    assert apply(ID, g) == g
    q = quadratic(R)
    assert apply(q, x3) == q.images[2]
    assert apply(q, com(2, 3, y1)) == bracket(bracket(x2, x3), x1)


def test_compose_identity_laws():
    phi = cubic(R)
    assert compose(phi, ID) == phi
    assert compose(ID, phi) == phi


def test_chein_maps_compose_additively():
    a, b = y1 * y2 + y4, 3 * y3 ** 2 - y1
    assert compose(chein_C(R, a), chein_C(R, b)) == chein_C(R, a + b)


def test_jacobian_examples():
    assert jacobian(ID) == PolyMatrix.identity(R)
    jq = jacobian(quadratic(R))
    assert jq.column(0) == (R.one, y3, -y2, R.zero)
    a = y1 * y4 ** 2
    jc = jacobian(chein_C(R, a))
    col = fox_derivatives(com(2, 3, a)).entries
    assert jc.column(0) == (R.one + col[0], *col[1:])
    assert [jc.column(j) for j in range(1, 4)] == [jacobian(ID).column(j) for j in range(1, 4)]


def test_is_automorphism_examples():
    assert is_automorphism(ID)
    assert jacobian_det(bad_map()) == R.one - y2
    assert not is_automorphism(bad_map())
    assert is_automorphism(quadratic(R))


def test_invert_examples():
    phi = Endomorphism(R, [x1 + bracket(x2, x3), x2, x3, x4])
    assert invert(phi) == Endomorphism(R, [x1 - bracket(x2, x3), x2, x3, x4])
    m = com(1, 2, y3 * y4) + com(3, 4, y1)
    assert invert(exponential_E(m)) == exponential_E(-m)
    a = y1 ** 2 * y4 - 2 * y2
    assert invert(chein_C(R, a)) == chein_C(R, -a)
    with pytest.raises(NotAnAutomorphismError):
        invert(bad_map())


def test_invert_with_linear_part():
    lm = LinearMap(R, [[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    phi = compose(lm.to_endomorphism(), cubic(R))
    psi = invert(phi)
    assert compose(phi, psi) == ID and compose(psi, phi) == ID


def test_conjugation_conventions():
    phi = cubic(R)
    assert conjugate(phi, ID) == phi
    assert commutator(phi, phi) == ID
    f = elementary(R, 4, 1, com(2, 3, y1))
    g = elementary(R, 1, 1, -com(2, 4))
    assert commutator(f, g) == chein_C(R, y1 * y2)


def test_builders():
    assert exponential_E(MagnusElement.zero(R)) == ID
    assert a_map(R, y3, R.zero) == Endomorphism(R, [x1, x2 - com(1, 4, y3), x3, x4])
    assert transposition(R, 1, 3).images == (x3, x2, x1, x4)
    assert d_map(R, R.zero) == ID
    with pytest.raises(DomainError):
        elementary(R, 1, 1, com(1, 2))
    with pytest.raises(DomainError):
        elementary(R, 1, 0, com(2, 3))


def test_one_row_recognition():
    assert is_one_row(cubic(R)) == 1
    assert is_chein_valid(1, bracket(bracket(x2, x3), x1))
    assert is_one_row(bad_map()) == 1
    assert not is_chein_valid(1, bracket(x2, x1))
    assert is_one_row(ID) is not None
    assert is_chein_valid(3, MagnusElement.zero(R))


def test_endo_degrees():
    assert endo_degrees(quadratic(R)) == (2, 2)
    assert endo_degrees(cubic(R)) == (3, 3)
    assert endo_degrees(ID) == (math.inf, -math.inf)


@given(st.data())
def test_chein_data_is_always_valid(data):
    ring = data.draw(rings((4, 5)))
    a = data.draw(polys(ring))
    assert is_chein_valid(1, com(2, 3, a, ring))
    assert is_one_row(chein_C(ring, a)) == 1


@given(st.data())
def test_one_row_maps_compose_additively(data):
    ring = data.draw(rings((4, 5)))
    n = ring.n
    f = com(2, 3, data.draw(polys(ring)), ring) + com(2, n, data.draw(polys(ring)), ring)
    g = com(3, n, data.draw(polys(ring)), ring)
    assert compose(one_row(ring, 1, f), one_row(ring, 1, g)) == one_row(ring, 1, f + g)


@given(st.data())
def test_exponential_inverse(data):
    ring = data.draw(rings((4,)))
    m = data.draw(commutators(ring, 1, 1))
    e = exponential_E(m)
    assert is_automorphism(e)
    assert compose(e, invert(e)) == Endomorphism.identity(ring)


@given(st.data())
def test_automorphism_agrees_with_invert(data):
    ring = Ring(4, data.draw(st.sampled_from([Field.rationals(), Field.gf(3)])))
    i, j = data.draw(st.lists(st.integers(1, 4), min_size=2, max_size=2, unique=True))
    a = data.draw(polys(ring, 1, 2))
    images = list(Endomorphism.identity(ring).images)
    images[i - 1] = images[i - 1] + com(j, i, a, ring)
    phi = Endomorphism(ring, images)
    try:
        invert(phi)
        inverted = True
    except NotAnAutomorphismError:
        inverted = False
    assert is_automorphism(phi) == inverted
