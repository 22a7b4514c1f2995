from hypothesis import strategies as st

from metabelian.fieldpoly import Field, Ring
from metabelian.magnus import MagnusElement

fields = st.sampled_from([Field.rationals(), Field.gf(2), Field.gf(3), Field.gf(5)])


@st.composite
def rings(draw, ns=(4, 5, 6)):
    return Ring(draw(st.sampled_from(ns)), draw(fields))


def scalars(field):
    if field.p is None:
        return st.fractions(min_value=-5, max_value=5, max_denominator=4).map(field)
    return st.integers(0, field.p - 1).map(field)


@st.composite
def polys(draw, ring, max_deg=3, max_terms=4):
    out = ring.zero
    for _ in range(draw(st.integers(0, max_terms))):
        exps = draw(st.lists(st.integers(0, max_deg), min_size=ring.n, max_size=ring.n))
        if sum(exps) > max_deg:
            continue
        out = out + ring.monomial(exps, draw(scalars(ring.field)))
    return out


@st.composite
def commutators(draw, ring, max_deg=2, max_pairs=2):
    f = MagnusElement.zero(ring)
    for _ in range(draw(st.integers(0, max_pairs))):
        i, j = draw(st.lists(st.integers(1, ring.n), min_size=2, max_size=2, unique=True))
        f = f + MagnusElement.commutator(ring, i, j, draw(polys(ring, max_deg, 2)))
    return f


@st.composite
def elements(draw, ring, max_deg=2):
    lin = draw(st.lists(scalars(ring.field), min_size=ring.n, max_size=ring.n))
    return MagnusElement.from_linear(ring, lin) + draw(commutators(ring, max_deg))


@st.composite
def ring_and(draw, *makers, ns=(4, 5, 6)):
    ring = draw(rings(ns))
    return (ring, *(draw(m(ring)) for m in makers))
