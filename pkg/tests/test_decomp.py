import random

import pytest
from hypothesis import assume, given, strategies as st

from metabelian.decomp import (ALMOST_TAME, PSI2_CONJUGATOR, TAME, Chein, CubicResidue, Elementary, GeneratorWord,
                               HypothesisContext, Linear, decompose_B, decompose_chein_monomial, decompose_D,
                               decompose_exponential, decompose_one_row, format_letter, linear_to_elementary,
                               permutation_to_elementary, psi2_conjugator_candidates, reduce_A, simplify,
                               verify_word, word_evaluate)
from metabelian.endo import (Endomorphism, LinearMap, a_map, b_map, chein_C, commutator, cubic, d_map,
                             exponential_E, linear, one_row, transposition)
from metabelian.errors import CubicObstructionError, DomainError, HypothesisError
from metabelian.fieldpoly import Field, Ring
from metabelian.magnus import MagnusElement, bracket

R = Ring(4)
y1, y2, y3, y4 = R.gens()
x1, x2, x3, x4 = (MagnusElement.generator(R, i) for i in range(1, 5))
ID = Endomorphism.identity(R)


def com(i, j, a=None, ring=R):
    return MagnusElement.commutator(ring, i, j, a)


def word(*letters, ring=R):
    return GeneratorWord(ring, tuple(letters))


def test_empty_and_single_letter_words():
    assert word_evaluate(word()) == ID
    e = Elementary(2, 3, com(1, 4, y3))
    assert word_evaluate(word(e)) == Endomorphism(R, [x1, 3 * x2 + com(1, 4, y3), x3, x4])


def test_word_of_four_is_a_commutator():
    phi = Elementary(4, 1, com(2, 3, y1))
    psi = Elementary(1, 2, com(3, 4, y2))
    w = word(phi, psi, phi.inverse(), psi.inverse())
    assert word_evaluate(w) == commutator(phi.evaluate(), psi.evaluate())


def test_verify_word_soundness():
    assert verify_word(word(), ID)
    w = decompose_chein_monomial(R, 1, (1, 1, 0, 0))
    assert len(w.letters) == 4
    assert verify_word(w, chein_C(R, y1 * y2))
    assert not verify_word(w, chein_C(R, y1 * y2 + y3 ** 2))
    assert not verify_word(w, ID)


def test_chein_monomial_examples():
    w = decompose_chein_monomial(R, 1, (0, 1, 0, 1))
    assert len(w.letters) == 1 and isinstance(w.letters[0], Elementary)
    w = decompose_chein_monomial(R, 1, (2, 0, 0, 0))
    assert verify_word(w, chein_C(R, y1 ** 2))
    assert w.kinds() <= {"elementary", "linear"}


def test_chein_monomial_with_scalar():
    ring = Ring(5, Field.gf(3))
    w = decompose_chein_monomial(ring, 2, (1, 0, 0, 0, 2))
    assert verify_word(w, chein_C(ring, 2 * ring.var(1) * ring.var(5) ** 2))


def test_chein_monomial_hypotheses():
    with pytest.raises(HypothesisError):
        decompose_chein_monomial(Ring(4, Field.gf(3)), 1, (2, 0, 0, 1))
    with pytest.raises(HypothesisError):
        decompose_chein_monomial(R, 1, (1, 0, 0, 0))
    ring = Ring(5, Field.gf(3))
    assert verify_word(decompose_chein_monomial(ring, 1, (2, 0, 0, 0, 1)),
                       chein_C(ring, ring.var(1) ** 2 * ring.var(5)))


def test_context_gates_small_characteristic():
    ctx = HypothesisContext.of(Ring(4, Field.gf(3)))
    assert not ctx.admits(TAME) and ctx.admits(ALMOST_TAME)
    assert HypothesisContext.of(Ring(5, Field.gf(3))).admits(TAME)
    with pytest.raises(HypothesisError):
        ctx.require(TAME)


def test_one_row_examples():
    f = com(2, 3, y2 + y4 ** 2)
    w = decompose_one_row(R, 1, f, TAME)
    assert verify_word(w, one_row(R, 1, f)) and w.alphabet == TAME

    cub = bracket(bracket(x2, x3), x1)
    with pytest.raises(CubicObstructionError) as err:
        decompose_one_row(R, 1, cub, TAME)
    assert err.value.residues

    w = decompose_one_row(R, 1, cub, ALMOST_TAME)
    assert len(w.letters) == 1
    (letter,) = w.letters
    assert isinstance(letter, CubicResidue) and (letter.row, letter.s, letter.t, letter.alpha) == (1, 2, 3, 1)
    assert verify_word(w, cubic(R))


def test_one_row_rejects_invalid_data():
    with pytest.raises(DomainError):
        decompose_one_row(R, 1, bracket(x2, x1), ALMOST_TAME)


def test_one_row_off_first_row():
    f = com(1, 3, y4 * y2 + 2 * y2) + com(3, 4, y1 ** 2)
    w = decompose_one_row(R, 2, f, ALMOST_TAME)
    assert verify_word(w, one_row(R, 2, f))
    residues = {(l.row, l.s, l.t): l.alpha for l in w.letters if isinstance(l, CubicResidue)}
    assert residues == {(2, 1, 3): 2}


def test_d_examples():
    assert decompose_D(R, R.zero, TAME).letters == ()
    w = decompose_D(R, y3 * y4, TAME)
    assert verify_word(w, d_map(R, y3 * y4)) and w.alphabet == TAME
    w = decompose_D(R, y1, ALMOST_TAME)
    assert verify_word(w, d_map(R, y1))
    assert "chein" in w.kinds()
    with pytest.raises(HypothesisError):
        decompose_D(R, y1, TAME)


def test_exponential_examples():
    zero = MagnusElement.zero(R)
    assert decompose_exponential(zero, TAME).letters == ()
    m = com(1, 2, y3 * y4)
    assert verify_word(decompose_exponential(m, TAME), exponential_E(m))
    m = com(1, 2, y3)
    assert verify_word(decompose_exponential(m, ALMOST_TAME), exponential_E(m))
    with pytest.raises(HypothesisError):
        decompose_exponential(m, TAME)
    with pytest.raises(DomainError):
        decompose_exponential(x1, ALMOST_TAME)


def test_reduce_a_examples():
    w = reduce_A(R, y3 ** 2, R.zero)
    assert len(w.letters) == 1 and isinstance(w.letters[0], Chein)
    assert verify_word(w, a_map(R, y3 ** 2, R.zero))
    w = reduce_A(R, R.one, R.const(5))
    assert verify_word(w, a_map(R, R.one, R.const(5)))
    assert sum(isinstance(l, Chein) for l in w.letters) == 1
    w = reduce_A(R, y3, y1)
    assert verify_word(w, a_map(R, y3, y1))


def test_b_examples():
    h = y2 * y3 + 1
    assert decompose_B(R, h, R.zero, R.zero).letters == ()
    one = R.one
    assert verify_word(decompose_B(R, one, one, one), b_map(R, one, one, one))
    R5 = Ring(5)
    a, b, c = R5.var(2), R5.var(1), R5.var(3)
    assert verify_word(decompose_B(R5, a, b, c), b_map(R5, a, b, c))


def test_psi2_conjugator_is_unique():
    assert psi2_conjugator_candidates(R, y2 + 1, y3, y1 * y4) == [PSI2_CONJUGATOR]


def test_linear_words():
    assert linear_to_elementary(LinearMap.identity(R)).letters == ()
    w = permutation_to_elementary(R, 1, 2)
    assert len(w.letters) == 4
    assert verify_word(w, transposition(R, 1, 2))
    rng = random.Random(5)
    F = Field.gf(5)
    ring = Ring(4, F)
    while True:
        lm = LinearMap(ring, [[F(rng.randrange(5)) for _ in range(4)] for _ in range(4)])
        if lm.is_invertible():
            break
    w = linear_to_elementary(lm)
    assert verify_word(w, linear(lm)) and w.kinds() <= {"elementary", "linear"}
    with pytest.raises(DomainError):
        linear_to_elementary(LinearMap(R, [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))


def test_simplify():
    e = Elementary(1, 1, com(2, 3, y4))
    assert simplify([e, e.inverse()]) == []
    assert simplify([Linear(LinearMap.identity(R))]) == []


def test_alphabet_discipline():
    with pytest.raises(DomainError):
        GeneratorWord(R, (Chein(1, com(2, 3, y1)),), TAME)


def test_letter_notation():
    assert format_letter(CubicResidue(R, 1, 2, 3, 1)).startswith("R1")


@given(st.integers(0, 3), st.integers(1, 3), st.integers(0, 2), st.sampled_from([1, 2, -1]))
def test_chein_monomials_property(i1, i2, i4, gamma):
    assume(i1 + i2 + i4 >= 2)
    exps = (i1, i2, 0, i4)
    w = decompose_chein_monomial(R, gamma, exps)
    assert verify_word(w, chein_C(R, R.monomial(exps, gamma)))
