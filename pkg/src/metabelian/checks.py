"""Randomised generators and the exact self-test suite.

Each ``criterion_*`` function runs one block of checks and returns a
:class:`CheckResult`; ``run_all`` runs blocks 1-10.  Everything is seeded, so
a fixed seed reproduces the same instances and the same report.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .decomp import (ALMOST_TAME, TAME, CubicResidue, decompose_B, decompose_chein_monomial, decompose_D,
                     decompose_exponential, decompose_one_row, reduce_A, verify_word)
from .endo import (Endomorphism, a_map, b_map, chein_C, compose, d_map, elementary, exponential_E,
                   invert, is_automorphism, jacobian, one_row)
from .errors import HypothesisError, NotADerivativeError
from .fieldpoly import Field, Ring, format_poly
from .magnus import (MagnusElement, bracket, element_degrees, eval_basis, fox_derivatives,
                     lift_column, to_basis)

FIELDS = (Field.rationals(), Field.gf(2), Field.gf(3), Field.gf(5))


# random instances -------------------------------------------------------------


def random_ring(rng: random.Random, ns=(4, 5, 6), fields=FIELDS) -> Ring:
    return Ring(rng.choice(ns), rng.choice(fields))


def random_commutator(rng: random.Random, ring: Ring, max_deg: int = 3, min_deg: int = 0,
                      pairs: int = 2, terms: int = 2) -> MagnusElement:
    """sum of [x_i, x_j]*a_ij with deg a_ij in [min_deg, max_deg]; x-degree is deg + 2."""
    f = MagnusElement.zero(ring)
    for _ in range(pairs):
        i, j = rng.sample(range(1, ring.n + 1), 2)
        f = f + MagnusElement.commutator(ring, i, j, ring.random_poly(rng, max_deg, min_deg, terms))
    return f


def random_element(rng: random.Random, ring: Ring, max_deg: int = 4) -> MagnusElement:
    F = ring.field
    lin = MagnusElement.from_linear(ring, [F.random_element(rng) for _ in range(ring.n)])
    return lin + random_commutator(rng, ring, max(0, max_deg - 2))


def random_endomorphism(rng: random.Random, ring: Ring, max_deg: int = 3) -> Endomorphism:
    F = ring.field
    images = []
    for i in range(1, ring.n + 1):
        lin = [F.random_element(rng, bound=2) for _ in range(ring.n)]
        images.append(MagnusElement.from_linear(ring, lin)
                      + random_commutator(rng, ring, max_deg - 2, 0, pairs=1, terms=2))
    return Endomorphism(ring, images)


def random_elementary(rng: random.Random, ring: Ring) -> Endomorphism:
    i = rng.randrange(1, ring.n + 1)
    others = [k for k in range(1, ring.n + 1) if k != i]
    F = ring.field
    lin = [0] * ring.n
    for k in others:
        lin[k - 1] = F.random_element(rng, bound=2)
    f = MagnusElement.from_linear(ring, lin)
    s, t = rng.sample(others, 2)
    free = [k for k in others]
    f = f + MagnusElement.commutator(ring, s, t, ring.random_poly(rng, 0, 0, 1, variables=free))
    return elementary(ring, i, F.random_element(rng, nonzero=True), f)


def random_one_row(rng: random.Random, ring: Ring, row: int, residues: bool = True):
    """(f, expected residues) for a Chein datum at ``row`` mixing every monomial kind."""
    others = [k for k in range(1, ring.n + 1) if k != row]
    F = ring.field
    f = MagnusElement.zero(ring)
    expected = {}
    for s, t in rng.sample([(s, t) for s in others for t in others if s < t], 2):
        free = ring.random_poly(rng, 2, 0, 2, variables=others)
        high = ring.var(row) * ring.random_poly(rng, 2, 1, 1)
        c = F.random_element(rng, nonzero=True) if residues and rng.random() < 0.7 else 0
        a = free + high + ring.var(row) * c
        f = f + MagnusElement.commutator(ring, s, t, a)
        if c:
            expected[(row, s, t)] = c
    return f, expected


# results ----------------------------------------------------------------------


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool = True
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def check(self, ok: bool, what: str):
        self.checked += 1
        if not ok:
            self.passed = False
            if len(self.failures) < 5:
                self.failures.append(what)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "" if self.passed else "; " + " | ".join(self.failures)
        return f"[{status}] criterion {self.number}: {self.title} ({self.checked} checks, {self.seconds:.1f}s){extra}"


def _timed(number: int, title: str):
    def wrap(fn: Callable[[CheckResult, random.Random], None]):
        def run(seed: int = 0) -> CheckResult:
            res = CheckResult(number, title)
            start = time.perf_counter()
            try:
                fn(res, random.Random(f"{seed}:{number}"))
            except Exception as exc:  # a crash is a failed criterion, reported not raised
                res.check(False, f"{type(exc).__name__}: {exc}")
            res.seconds = time.perf_counter() - start
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


# criteria ---------------------------------------------------------------------


@_timed(1, "algebra laws")
def criterion_1(res: CheckResult, rng: random.Random):
    for k in range(500):
        ring = random_ring(rng)
        u, v, w = (random_element(rng, ring, 4) for _ in range(3))
        law = k % 3
        if law == 0:
            res.check(not (bracket(u, v) + bracket(v, u)), f"anticommutativity #{k}")
        elif law == 1:
            jac = bracket(bracket(u, v), w) + bracket(bracket(v, w), u) + bracket(bracket(w, u), v)
            res.check(not jac, f"Jacobi #{k}")
        else:
            m1, m2 = u.commutator_part(), v.commutator_part()
            res.check(not bracket(m1, m2), f"metabelian #{k}")


@_timed(2, "Fox columns and lifting")
def criterion_2(res: CheckResult, rng: random.Random):
    for k in range(200):
        ring = random_ring(rng)
        f = random_commutator(rng, ring, 4, 0, pairs=3)
        col = fox_derivatives(f)
        res.check(not col.y_contract() and lift_column(col) == f, f"round trip #{k}")
    for k in range(50):
        ring = random_ring(rng)
        while True:
            col = [ring.random_poly(rng, 3, 0, 2) for _ in range(ring.n)]
            if sum((ring.var(i + 1) * c for i, c in enumerate(col)), ring.zero):
                break
        try:
            lift_column(col)
            res.check(False, f"accepted non-derivative #{k}")
        except NotADerivativeError:
            res.check(True, "")


def jacobi_split_sides(ring: Ring, i1: int, i_n: int) -> tuple[MagnusElement, MagnusElement]:
    n = ring.n
    y = ring.gens()
    base = y[0] ** i1 * y[n - 1] ** (i_n - 1)
    lhs = MagnusElement.commutator(ring, 2, 3, base * y[n - 1])
    rhs = MagnusElement.commutator(ring, 2, n, base * y[2]) + MagnusElement.commutator(ring, n, 3, base * y[1])
    return lhs, rhs


@_timed(3, "basis round trip and the Jacobi split")
def criterion_3(res: CheckResult, rng: random.Random):
    for k in range(200):
        ring = random_ring(rng)
        f = random_element(rng, ring, 6)
        res.check(eval_basis(to_basis(f)) == f, f"round trip #{k}")
    for n in (4, 5):
        ring = Ring(n)
        for i1 in range(1, 4):
            for i_n in range(1, 4):
                lhs, rhs = jacobi_split_sides(ring, i1, i_n)
                res.check(to_basis(lhs) == to_basis(rhs), f"split n={n} i1={i1} in={i_n}")


def chain_rule_holds(phi: Endomorphism, psi: Endomorphism) -> bool:
    lhs = jacobian(compose(phi, psi))
    rhs = jacobian(phi) @ jacobian(psi).substitute(phi.linear_images)
    return lhs == rhs


@_timed(4, "chain rule")
def criterion_4(res: CheckResult, rng: random.Random):
    for k in range(100):
        ring = random_ring(rng, ns=(4, 5))
        phi, psi = random_endomorphism(rng, ring), random_endomorphism(rng, ring)
        res.check(chain_rule_holds(phi, psi), f"pair #{k}")


@_timed(5, "inversion and the Jacobian criterion")
def criterion_5(res: CheckResult, rng: random.Random):
    for k in range(100):
        ring = random_ring(rng, ns=(4, 5))
        phi = Endomorphism.identity(ring)
        for _ in range(rng.randint(1, 8)):
            phi = compose(phi, random_elementary(rng, ring))
        psi = invert(phi)
        ident = Endomorphism.identity(ring)
        res.check(compose(phi, psi) == ident and compose(psi, phi) == ident, f"product #{k}")
    for k in range(20):
        ring = random_ring(rng, ns=(4, 5))
        i, j = rng.sample(range(1, ring.n + 1), 2)
        a = ring.random_poly(rng, 2, 0, 2)
        if not a:
            a = ring.one
        images = list(Endomorphism.identity(ring).images)
        # d/dx_i of [x_j, x_i]*a is -y_j*a, so det J = 1 - y_j*a is not a unit
        images[i - 1] = images[i - 1] + MagnusElement.commutator(ring, j, i, a)
        res.check(not is_automorphism(Endomorphism(ring, images)), f"non-automorphism #{k}")


@_timed(6, "Chein monomials are tame")
def criterion_6(res: CheckResult, rng: random.Random):
    for n, F in ((4, Field.rationals()), (5, Field.gf(3))):
        ring = Ring(n, F)
        for d in range(2, 6):
            for exps in ring.exponents_of_degree(d):
                w = decompose_chein_monomial(ring, 1, exps)
                ok = verify_word(w, chein_C(ring, ring.monomial(exps))) and w.kinds() <= {"elementary", "linear"}
                res.check(ok, f"n={n} {F!r} {exps}")
    ring = Ring(4, Field.gf(3))
    for i1 in range(1, 5):
        try:
            decompose_chein_monomial(ring, 1, (i1, 0, 0, 1))
            res.check(False, f"n=4 GF(3) y1^{i1}*y4 did not raise")
        except HypothesisError:
            res.check(True, "")


def _ldeg(f: MagnusElement) -> int:
    return element_degrees(f)[0]


@_timed(7, "exponential automorphisms")
def criterion_7(res: CheckResult, rng: random.Random):
    tame_fields = (Field.rationals(), Field.gf(2), Field.gf(5))
    for k in range(50):
        ring = Ring(rng.choice((4, 5)), rng.choice(tame_fields))
        m = random_commutator(rng, ring, 3, 2, pairs=rng.randint(1, 2), terms=1)
        if not m:
            m = MagnusElement.commutator(ring, 1, 2, ring.var(3) ** 2)
        w = decompose_exponential(m, TAME)
        res.check(_ldeg(m) >= 4 and verify_word(w, exponential_E(m)) and w.alphabet == TAME, f"tame #{k}")
    for k in range(50):
        ring = random_ring(rng, ns=(4, 5))
        m = random_commutator(rng, ring, 1, 1, pairs=1, terms=1) + random_commutator(rng, ring, 2, 1, 1, 1)
        if _ldeg(m) != 3:
            m = m + MagnusElement.commutator(ring, 1, 2, ring.var(3))
            if _ldeg(m) != 3:
                m = MagnusElement.commutator(ring, 1, 2, ring.var(3))
        w = decompose_exponential(m, ALMOST_TAME)
        res.check(verify_word(w, exponential_E(m)), f"almost tame #{k}")
        try:
            decompose_exponential(m, TAME)
            res.check(False, f"tame mode accepted ldeg 3 #{k}")
        except HypothesisError:
            res.check(True, "")


@_timed(8, "D(a)")
def criterion_8(res: CheckResult, rng: random.Random):
    tame_fields = (Field.rationals(), Field.gf(2), Field.gf(5))
    for k in range(50):
        ring = Ring(rng.choice((4, 5)), rng.choice(tame_fields))
        a = ring.random_poly(rng, 3, 2, 2) or ring.var(3) * ring.var(4)
        w = decompose_D(ring, a, TAME)
        res.check(verify_word(w, d_map(ring, a)) and w.alphabet == TAME, f"tame #{k}")
    for k in range(50):
        ring = random_ring(rng, ns=(4, 5))
        a = ring.random_poly(rng, 1, 1, 1) + ring.random_poly(rng, 3, 2, 1)
        if a.ldeg != 1:
            a = a + ring.var(1)
        w = decompose_D(ring, a, ALMOST_TAME)
        res.check(a.ldeg == 1 and verify_word(w, d_map(ring, a)), f"almost tame #{k}")


@_timed(9, "A(h, g) and B(h, f, g)")
def criterion_9(res: CheckResult, rng: random.Random):
    fields = (Field.rationals(), Field.gf(3))
    for k in range(50):
        ring = Ring(rng.choice((4, 5)), rng.choice(fields))
        h, g = ring.random_poly(rng, 3, 0, 2), ring.random_poly(rng, 3, 0, 3)
        w = reduce_A(ring, h, g)
        res.check(verify_word(w, a_map(ring, h, g)), f"A #{k}")
    for k in range(25):
        ring = Ring(rng.choice((4, 5)), rng.choice(fields))
        h, f, g = (ring.random_poly(rng, 3, 0, 2) for _ in range(3))
        w = decompose_B(ring, h, f, g)
        res.check(verify_word(w, b_map(ring, h, f, g)), f"B #{k}")


@_timed(10, "one-row maps modulo cubic residues")
def criterion_10(res: CheckResult, rng: random.Random):
    for k in range(25):
        ring = random_ring(rng, ns=(4, 5))
        while ring.n == 4 and ring.field.characteristic() == 3:
            ring = random_ring(rng, ns=(4, 5))
        row = rng.randrange(1, ring.n + 1)
        f, expected = random_one_row(rng, ring, row)
        w = decompose_one_row(ring, row, f, ALMOST_TAME)
        residues = {}
        clean = True
        for letter in w.letters:
            if letter.is_tame():
                continue
            if not isinstance(letter, CubicResidue) or letter.inverted:
                clean = False
                continue
            key = (letter.row, letter.s, letter.t)
            clean = clean and key not in residues
            residues[key] = letter.alpha
        ok = verify_word(w, one_row(ring, row, f)) and clean and residues == expected
        res.check(ok, f"one-row #{k} row {row}")


@_timed(11, "print/parse round trip")
def criterion_11(res: CheckResult, rng: random.Random):
    from .parse import format_endomorphism, parse_element, parse_endomorphism, parse_poly

    for k in range(100):
        ring = random_ring(rng)
        kind = k % 3
        if kind == 0:
            v = ring.random_poly(rng, 4, 0, 4)
            ok = parse_poly(format_poly(v), ring) == v
        elif kind == 1:
            v = random_element(rng, ring, 6)
            ok = parse_element(str(v), ring) == v
        else:
            v = random_endomorphism(rng, ring)
            ok = parse_endomorphism(format_endomorphism(v), ring) == v
        res.check(ok, f"value #{k} ({('poly', 'element', 'endomorphism')[kind]})")


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)


def run_all(seed: int = 0, only: set[int] | None = None, report: Callable[[str], None] | None = None):
    results = []
    for crit in CRITERIA:
        number = int(crit.__name__.rsplit("_", 1)[1])
        if only and number not in only:
            continue
        res = crit(seed)
        if report:
            report(res.line())
        results.append(res)
    return results
