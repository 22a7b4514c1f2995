"""Decomposition of automorphisms of M_n into generator words.

Every routine here turns a constructive tameness argument into an algorithm
that emits a :class:`GeneratorWord` and then certifies it: the word is
multiplied out exactly and compared with the target automorphism.  Nothing is
returned unless that comparison succeeds.

Letters come in four kinds:

* ``Elementary(i, alpha, f)``  x_i -> alpha*x_i + f with f free of x_i
* ``Linear(matrix)``           an element of GL_n(K)
* ``Chein(i, f)``              x_i -> x_i + f with f in M_n', df/dx_i = 0
* ``CubicResidue(i, s, t, alpha)``  x_i -> x_i + alpha*[[x_s, x_t], x_i]

A tame word uses only the first two kinds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Sequence

from .endo import (Endomorphism, LinearMap, a_map, apply, b_map, chein_C,
                   commutator, compose, d_map, elementary, exponential_E,
                   is_chein_valid, is_free_of, one_row)
from .errors import (CertificationError, CubicObstructionError, DimensionError,
                     DomainError, HypothesisError, NotAnAutomorphismError)
from .fieldpoly import Poly, Ring
from .magnus import MagnusElement, commutator_pairs, element_degrees

log = logging.getLogger(__name__)

TAME = "tame"
ALMOST_TAME = "almost_tame"
MODES = (TAME, ALMOST_TAME)

# conjugator of psi_2 in the B(h, f, g) factorisation: x1 -> x3, x2 -> x1, x3 -> x2
PSI2_CONJUGATOR = {1: 3, 2: 1, 3: 2}


def _gen(ring: Ring, i: int) -> MagnusElement:
    return MagnusElement.generator(ring, i)


def _com(ring: Ring, i: int, j: int, a: Poly) -> MagnusElement:
    return MagnusElement.commutator(ring, i, j, a)


# letters ----------------------------------------------------------------------


class Letter:
    kind = "letter"
    inverted: bool

    def forward(self) -> Endomorphism:
        raise NotImplementedError

    def backward(self) -> Endomorphism:
        raise NotImplementedError

    def evaluate(self) -> Endomorphism:
        return _letter_value(self)

    def inverse(self) -> "Letter":
        return replace(self, inverted=not self.inverted)

    def is_tame(self) -> bool:
        return False

    def is_identity(self) -> bool:
        return False


@lru_cache(maxsize=4096)
def _letter_value(letter: Letter) -> Endomorphism:
    return letter.backward() if letter.inverted else letter.forward()


@dataclass(frozen=True)
class Elementary(Letter):
    row: int
    alpha: object
    f: MagnusElement
    inverted: bool = False
    kind = "elementary"

    def __post_init__(self):
        ring = self.f.ring
        ring.check_index(self.row)
        if not ring.field(self.alpha):
            raise DomainError("elementary letter with zero scalar")
        if not is_free_of(self.f, self.row):
            raise DomainError(f"elementary letter at row {self.row}: f contains x{self.row}")

    @property
    def ring(self):
        return self.f.ring

    def forward(self):
        return elementary(self.ring, self.row, self.alpha, self.f)

    def backward(self):
        F = self.ring.field
        inv = F.inv(F(self.alpha))
        return elementary(self.ring, self.row, inv, self.f * F.norm(-inv))

    def is_tame(self):
        return True

    def is_identity(self):
        return self.ring.field(self.alpha) == 1 and not self.f

    def conjugated(self, perm, scales, sigma):
        c = self.ring.field.inv(scales[self.row - 1])
        return Elementary(perm[self.row], self.alpha, apply(sigma, self.f) * c, self.inverted)


@dataclass(frozen=True)
class Linear(Letter):
    lmap: LinearMap
    inverted: bool = False
    kind = "linear"

    def __post_init__(self):
        if not self.lmap.is_invertible():
            raise DomainError("linear letter with singular matrix")

    @property
    def ring(self):
        return self.lmap.ring

    def forward(self):
        return self.lmap.to_endomorphism()

    def backward(self):
        return self.lmap.inverse().to_endomorphism()

    def is_tame(self):
        return True

    def is_identity(self):
        return self.lmap == LinearMap.identity(self.ring)

    def conjugated(self, perm, scales, sigma):
        lm = sigma.linear_map()
        return Linear(lm @ self.lmap @ lm.inverse(), self.inverted)


@dataclass(frozen=True)
class Chein(Letter):
    row: int
    f: MagnusElement
    inverted: bool = False
    kind = "chein"

    def __post_init__(self):
        if not self.f.is_commutator() or not is_chein_valid(self.row, self.f):
            raise DomainError(f"Chein letter at row {self.row} is not an automorphism")

    @property
    def ring(self):
        return self.f.ring

    def forward(self):
        return one_row(self.ring, self.row, self.f, certify=False)

    def backward(self):
        return one_row(self.ring, self.row, -self.f, certify=False)

    def is_identity(self):
        return not self.f

    def conjugated(self, perm, scales, sigma):
        c = self.ring.field.inv(scales[self.row - 1])
        return Chein(perm[self.row], apply(sigma, self.f) * c, self.inverted)


@dataclass(frozen=True)
class CubicResidue(Letter):
    ring: Ring
    row: int
    s: int
    t: int
    alpha: object
    inverted: bool = False
    kind = "cubic_residue"

    def __post_init__(self):
        for k in (self.row, self.s, self.t):
            self.ring.check_index(k)
        if len({self.row, self.s, self.t}) != 3 or self.s > self.t:
            raise DomainError("cubic residue needs s < t, both different from the row")

    def element(self, sign: int = 1) -> MagnusElement:
        ring = self.ring
        return _com(ring, self.s, self.t, ring.var(self.row)) * (self.alpha * sign)

    def forward(self):
        return one_row(self.ring, self.row, self.element(), certify=False)

    def backward(self):
        return one_row(self.ring, self.row, self.element(-1), certify=False)

    def is_identity(self):
        return not self.alpha

    def conjugated(self, perm, scales, sigma):
        F = self.ring.field
        alpha = F.norm(self.alpha * scales[self.s - 1] * scales[self.t - 1])
        s, t = perm[self.s], perm[self.t]
        if s > t:
            s, t, alpha = t, s, F.norm(-alpha)
        return CubicResidue(self.ring, perm[self.row], s, t, alpha, self.inverted)


def letter_ring(letter: Letter) -> Ring:
    return letter.ring


# words ------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorWord:
    """An ordered product of letters, evaluated left to right under compose."""

    ring: Ring
    letters: tuple[Letter, ...] = ()
    alphabet: str = TAME
    depth: int = 0
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.alphabet not in MODES:
            raise DomainError(f"unknown alphabet {self.alphabet!r}")
        for letter in self.letters:
            if letter.ring != self.ring:
                raise DimensionError("letter over the wrong ring")
        if self.alphabet == TAME:
            bad = [l.kind for l in self.letters if not l.is_tame()]
            if bad:
                raise DomainError(f"tame word contains non-tame letters: {sorted(set(bad))}")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return " * ".join(format_letter(l) for l in self.letters) or "id"

    def evaluate(self) -> Endomorphism:
        return word_evaluate(self)

    def inverse(self) -> "GeneratorWord":
        return replace(self, letters=tuple(l.inverse() for l in reversed(self.letters)))

    def kinds(self) -> set[str]:
        return {l.kind for l in self.letters}


def format_letter(letter: Letter) -> str:
    inv = "^-1" if letter.inverted else ""
    if isinstance(letter, Elementary):
        return f"E{letter.row}({letter.alpha}; {letter.f}){inv}"
    if isinstance(letter, Chein):
        return f"C{letter.row}({letter.f}){inv}"
    if isinstance(letter, CubicResidue):
        return f"R{letter.row}({letter.alpha}*[[x{letter.s},x{letter.t}],x{letter.row}]){inv}"
    if isinstance(letter, Linear):
        return f"L({[list(r) for r in letter.lmap.matrix]}){inv}"
    return repr(letter)


def word_evaluate(w: GeneratorWord | Sequence[Letter], ring: Ring | None = None) -> Endomorphism:
    letters = w.letters if isinstance(w, GeneratorWord) else tuple(w)
    if ring is None:
        ring = w.ring if isinstance(w, GeneratorWord) else letters[0].ring
    result = Endomorphism.identity(ring)
    for letter in letters:
        if letter.ring != ring:
            raise DimensionError("letter over the wrong ring")
        result = compose(result, letter.evaluate())
    return result


def verify_word(w: GeneratorWord, target: Endomorphism) -> bool:
    return w.ring == target.ring and word_evaluate(w) == target


def invert_letters(letters: Sequence[Letter]) -> list[Letter]:
    return [l.inverse() for l in reversed(letters)]


def conjugate_letters(letters: Sequence[Letter], sigma: LinearMap) -> list[Letter]:
    """Letters of the word for phi^sigma = sigma*phi*sigma^-1, sigma a monomial matrix."""
    form = sigma.monomial_form()
    if form is None:
        raise DomainError("letters can only be relabelled by monomial linear maps")
    perm, scales = form
    endo = sigma.to_endomorphism()
    return [l.conjugated(perm, scales, endo) for l in letters]


def permutation_map(ring: Ring, perm: dict[int, int]) -> LinearMap:
    return LinearMap.permutation(ring, perm)


def swap(ring: Ring, s: int, t: int) -> LinearMap:
    return LinearMap.permutation(ring, {s: t, t: s})


def _cancels(a: Letter, b: Letter) -> bool:
    return a.inverse() == b


def _merge(a: Letter, b: Letter) -> Letter | None:
    if a.inverted != b.inverted or type(a) is not type(b):
        return None
    if isinstance(a, Chein) and a.row == b.row:
        return Chein(a.row, a.f + b.f, a.inverted)
    if isinstance(a, Elementary) and a.row == b.row:
        F = a.ring.field
        if F(a.alpha) == 1 and F(b.alpha) == 1:
            return Elementary(a.row, 1, a.f + b.f, a.inverted)
    if isinstance(a, CubicResidue) and (a.row, a.s, a.t) == (b.row, b.s, b.t):
        return CubicResidue(a.ring, a.row, a.s, a.t, a.ring.field.norm(a.alpha + b.alpha), a.inverted)
    return None


def simplify(letters: Iterable[Letter]) -> list[Letter]:
    """Drop identity letters, cancel adjacent inverse pairs, merge adjacent same-row letters."""
    out: list[Letter] = []
    for letter in letters:
        if letter.is_identity():
            continue
        while out:
            top = out[-1]
            if _cancels(top, letter):
                out.pop()
                letter = None
                break
            merged = _merge(top, letter)
            if merged is None:
                break
            out.pop()
            if merged.is_identity():
                letter = None
                break
            letter = merged
        if letter is not None:
            out.append(letter)
    return out


# hypotheses -------------------------------------------------------------------


@dataclass(frozen=True)
class HypothesisContext:
    n: int
    characteristic: int

    @classmethod
    def of(cls, ring: Ring) -> "HypothesisContext":
        return cls(ring.n, ring.field.characteristic())

    def admits_tame(self) -> bool:
        return self.n >= 5 or (self.n == 4 and self.characteristic != 3)

    def admits_almost_tame(self) -> bool:
        return self.n >= 4

    def admits(self, mode: str) -> bool:
        if mode == TAME:
            return self.admits_tame()
        if mode == ALMOST_TAME:
            return self.admits_almost_tame()
        raise DomainError(f"unknown mode {mode!r}")

    def require(self, mode: str):
        if not self.admits(mode):
            raise HypothesisError(f"{mode} mode needs "
                                  + ("n >= 5, or n = 4 with char != 3" if mode == TAME else "n >= 4")
                                  + f"; got n = {self.n}, char = {self.characteristic}")


def _mode(mode: str) -> str:
    mode = mode.replace("-", "_")
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}")
    return mode


class _Trace:
    """Recursion bookkeeping: current and maximum depth, plus a step counter."""

    def __init__(self):
        self.depth = 0
        self.max_depth = 0
        self.steps = 0

    def enter(self, label: str, measure):
        self.depth += 1
        self.steps += 1
        self.max_depth = max(self.max_depth, self.depth)
        log.debug("%s%s %s", "  " * self.depth, label, measure)

    def leave(self):
        self.depth -= 1


def _certify(letters: Sequence[Letter], target: Endomorphism, what: str) -> None:
    if word_evaluate(letters, target.ring) != target:
        raise CertificationError(f"{what}: emitted word does not recompose to the target")


def _word(ring, letters, mode, trace, target, what) -> GeneratorWord:
    letters = simplify(letters)
    _certify(letters, target, what)
    alphabet = TAME if all(l.is_tame() for l in letters) and mode == TAME else ALMOST_TAME
    return GeneratorWord(ring, tuple(letters), alphabet, trace.max_depth if trace else 0,
                         {"steps": trace.steps if trace else 0})


@lru_cache(maxsize=None)
def check_conventions() -> None:
    """The commutator identity [phi, psi] = C(y1*y2) over Q, n = 4.

    Run once; if the composition/commutator conventions were ever to drift,
    the engine refuses to run rather than flip them silently.
    """
    ring = Ring(4)
    y1, y2 = ring.var(1), ring.var(2)
    phi = elementary(ring, 4, 1, _com(ring, 2, 3, y1))
    psi = elementary(ring, 1, 1, _com(ring, 2, 4, ring.one) * -1)
    if commutator(phi, psi) != chein_C(ring, y1 * y2):
        raise CertificationError("commutator convention check failed")


# Chein automorphisms C(a): tame decomposition -----------------------------------


def _exps_poly(ring: Ring, exps) -> Poly:
    return ring.monomial(exps)


def _chein_monomial(ring: Ring, gamma, exps: tuple[int, ...], trace: _Trace) -> list[Letter]:
    """Elementary letters whose product is C(gamma*y^exps); ldeg >= 2 unless y1 is absent."""
    n = ring.n
    F = ring.field
    gamma = F(gamma)
    a = ring.monomial(exps, gamma)
    i1 = exps[0]
    trace.enter("C", (exps, gamma))
    try:
        if i1 == 0:
            return [Elementary(1, 1, _com(ring, 2, 3, a))]
        if sum(exps) < 2:
            raise CubicObstructionError(f"C({a}) is a multiple of the cubic automorphism", [(1, 2, 3, gamma)])

        j = next((j for j in range(2, n) if exps[j - 1] >= 1), None)
        if j is not None:
            # some y_j with 1 < j < n divides a: C(a) = [phi, psi]
            e_phi = list(exps[:j]) + [0] * (n - j)
            e_phi[j - 1] -= 1
            e_psi = [0] * j + list(exps[j:])
            phi = Elementary(n, 1, _com(ring, 2, 3, ring.monomial(e_phi)))
            psi = Elementary(1, 1, _com(ring, j, n, ring.monomial(e_psi)) * F.norm(-gamma))
            return [phi, psi, phi.inverse(), psi.inverse()]

        if gamma != 1:
            # C(gamma*b) = C(b)^sigma with sigma = (x1, gamma*x2, x3, ..., xn)
            inner = _chein_monomial(ring, 1, exps, trace)
            sigma = LinearMap.diagonal(ring, [1, gamma] + [1] * (n - 2))
            return conjugate_letters(inner, sigma)

        i_n = exps[n - 1]
        if i_n >= 2:
            # a = y1^k*y_n^m, m >= 2: split by the Jacobi rewrite into two commutator-type halves
            e1 = [0] * n
            e1[0], e1[2], e1[n - 1] = i1, i_n - 1, 1
            e2 = [0] * n
            e2[0], e2[1], e2[n - 1] = i1, i_n - 1, 1
            w_phi = conjugate_letters(_chein_monomial(ring, 1, tuple(e1), trace), swap(ring, 3, n))
            w_psi = conjugate_letters(_chein_monomial(ring, 1, tuple(e2), trace), swap(ring, 2, n))
            _check_jacobi_split(ring, i1, i_n)
            return w_phi + w_psi

        if i_n == 1:
            if n >= 5:
                # conjugating by (4n) moves the y_n factor into slot 4
                e = [0] * n
                e[0], e[3] = i1, 1
                return conjugate_letters(_chein_monomial(ring, 1, tuple(e), trace), swap(ring, 4, n))
            if F.characteristic() == 3:
                raise HypothesisError("C(y1^k*y4) at n = 4 needs division by 3; "
                                      "characteristic 3 is outside the hypothesis")
            return _chein_y1_yn_small_n(ring, i1, trace)

        # a = y1^s, s >= 2
        s = i1
        e_phi = [0] * n
        e_phi[0], e_phi[n - 1] = s - 1, 1
        w_phi = _chein_monomial(ring, 1, tuple(e_phi), trace)
        beta = Elementary(n, 1, _gen(ring, 1))
        e2 = [0] * n
        e2[n - 1] = s
        w_f2 = conjugate_letters([Elementary(1, 1, _com(ring, 2, 3, ring.monomial(e2)) * -1)], swap(ring, 1, n))
        e3 = [0] * n
        e3[0], e3[n - 1] = 1, s - 1
        w_f3 = conjugate_letters(_chein_monomial(ring, -1, tuple(e3), trace), swap(ring, 1, n))
        # [beta, phi] = C(a) * f2 * f3
        return [beta] + w_phi + [beta.inverse()] + invert_letters(w_phi) + invert_letters(w_f3) + invert_letters(w_f2)
    finally:
        trace.leave()


def _chein_y1_yn_small_n(ring: Ring, i1: int, trace: _Trace) -> list[Letter]:
    """C(y1^i1 * y_n) for n = 4 in characteristic != 3."""
    n = ring.n
    e_tau = [0] * n
    e_tau[0], e_tau[1] = i1, 1
    w_tau = _chein_monomial(ring, 1, tuple(e_tau), trace)
    alpha = Elementary(2, 1, _gen(ring, n))
    w_tau_2n = conjugate_letters(w_tau, swap(ring, 2, n))
    # [alpha, tau] = sigma * tau^(2n)
    w_sigma = [alpha] + w_tau + [alpha.inverse()] + invert_letters(w_tau) + invert_letters(w_tau_2n)
    # C(3a) = sigma * (sigma^-1)^(23)
    w_c3a = w_sigma + conjugate_letters(invert_letters(w_sigma), swap(ring, 2, 3))
    third = ring.field.inv(3)
    return conjugate_letters(w_c3a, LinearMap.diagonal(ring, [1, third] + [1] * (n - 2)))


def _check_jacobi_split(ring: Ring, i1: int, i_n: int) -> None:
    """[x2,x3]*y1^i1*yn^in = [x2,xn]*y1^i1*y3*yn^(in-1) + [xn,x3]*y1^i1*y2*yn^(in-1)."""
    n = ring.n
    y = ring.gens()
    base = y[0] ** i1 * y[n - 1] ** (i_n - 1)
    lhs = _com(ring, 2, 3, base * y[n - 1])
    rhs = _com(ring, 2, n, base * y[2]) + _com(ring, n, 3, base * y[1])
    if lhs != rhs:
        raise CertificationError("Jacobi split of [x2,x3]*a failed")


def decompose_chein_monomial(ring: Ring, gamma, exps: Sequence[int],
                             ctx: HypothesisContext | None = None) -> GeneratorWord:
    """Tame word for C(gamma * y^exps), total degree >= 2."""
    check_conventions()
    ctx = ctx or HypothesisContext.of(ring)
    exps = tuple(int(e) for e in exps)
    if len(exps) != ring.n:
        raise DimensionError("exponent vector length must equal n")
    if ring.n < 4:
        raise HypothesisError("tame decomposition of C(a) needs n >= 4")
    gamma = ring.field(gamma)
    if not gamma:
        raise DomainError("gamma must be nonzero")
    if sum(exps) < 2:
        raise HypothesisError(f"ldeg(a) = {sum(exps)} < 2")
    trace = _Trace()
    letters = _chein_monomial(ring, gamma, exps, trace)
    target = chein_C(ring, ring.monomial(exps, gamma))
    return _word(ring, letters, TAME, trace, target, "C(a)")


# one-row maps -----------------------------------------------------------------


def _pair_permutation(ring: Ring, first: Sequence[int], images: Sequence[int]) -> dict[int, int]:
    """A permutation sending first[k] -> images[k], other indices filled in order."""
    perm = dict(zip(first, images))
    free_src = [k for k in range(1, ring.n + 1) if k not in perm]
    free_dst = [k for k in range(1, ring.n + 1) if k not in perm.values()]
    perm.update(zip(free_src, free_dst))
    return perm


def _one_row_letters(ring: Ring, f: MagnusElement, mode: str, trace: _Trace):
    """Letters for (x1 + f, x2, ..., xn), plus the cubic residues found."""
    pairs = commutator_pairs(f)
    letters: list[Letter] = []
    residues = []
    for (s, t), a in sorted(pairs.items()):
        if s == 1:
            raise CertificationError("Chein datum has a [x1, x_t] component despite df/dx1 = 0")
        perm = _pair_permutation(ring, (1, 2, 3), (1, s, t))
        sigma = permutation_map(ring, perm)
        inv = {v: k for k, v in perm.items()}
        b = a.substitute([ring.var(inv[k]) for k in range(1, ring.n + 1)])
        local: list[Letter] = []
        free_part = ring.zero
        for exps, c in b.terms.items():
            if exps[0] == 0:
                free_part = free_part + ring.monomial(exps, c)
            elif sum(exps) == 1:
                residues.append((1, s, t, c))
                if mode == ALMOST_TAME:
                    local.append(CubicResidue(ring, 1, 2, 3, c))
            else:
                local.extend(_chein_monomial(ring, c, exps, trace))
        if free_part:
            local.insert(0, Elementary(1, 1, _com(ring, 2, 3, free_part)))
        letters.extend(conjugate_letters(local, sigma))
    return letters, residues


def decompose_one_row(ring: Ring, i: int, f: MagnusElement, mode: str = TAME,
                      ctx: HypothesisContext | None = None) -> GeneratorWord:
    """Word for the Chein automorphism (x_1, ..., x_i + f, ..., x_n), f in M_n'."""
    mode = _mode(mode)
    check_conventions()
    ctx = ctx or HypothesisContext.of(ring)
    if mode == ALMOST_TAME:
        ctx.require(mode)
    elif ring.n < 4:
        ctx.require(mode)
    ring.check_index(i)
    if not f.is_commutator():
        raise DomainError("one-row datum must lie in [M_n, M_n]")
    if not is_chein_valid(i, f):
        raise NotAnAutomorphismError(f"df/dx{i} = {f.module[i - 1]} != 0: not a Chein automorphism")
    target = one_row(ring, i, f)
    trace = _Trace()
    letters = _one_row_raw(ring, i, f, mode, trace)
    return _word(ring, letters, mode, trace, target, "one-row map")


def _one_row_raw(ring: Ring, i: int, f: MagnusElement, mode: str, trace: _Trace) -> list[Letter]:
    if i != 1:
        tr = swap(ring, 1, i)
        f1 = apply(tr.to_endomorphism(), f)
        return conjugate_letters(_one_row_raw(ring, 1, f1, mode, trace), tr)
    letters, residues = _one_row_letters(ring, f, mode, trace)
    if residues and mode == TAME:
        names = ", ".join(f"{c}*[[x{s},x{t}],x1]" for _, s, t, c in residues)
        raise CubicObstructionError(f"cubic obstruction: residue {names} is not known to be tame", residues)
    return letters


def _row_map(ring: Ring, row: int, f: MagnusElement, mode: str, trace: _Trace) -> list[Letter]:
    """A Chein factor: decomposed in tame mode, kept whole otherwise."""
    if not f:
        return []
    if mode == TAME:
        return _one_row_raw(ring, row, f, TAME, trace)
    return [Chein(row, f)]


# D(a) ---------------------------------------------------------------------------


def _d_y4(ring: Ring, b: Poly, mode: str, trace: _Trace) -> list[Letter]:
    """D(y4*b) = [phi, psi]."""
    y = ring.gens()
    phi = (_row_map(ring, 1, _com(ring, 3, 4, y[0] * b) * -1, mode, trace)
           + _row_map(ring, 2, _com(ring, 3, 4, y[1] * b) * -1, mode, trace))
    psi = Elementary(3, 1, _com(ring, 1, 2, ring.one))
    return phi + [psi] + invert_letters(phi) + [psi.inverse()]


def _d_monomial(ring: Ring, mono: Poly, mode: str, trace: _Trace) -> list[Letter]:
    (exps, c), = mono.terms.items()
    n = ring.n
    trace.enter("D", exps)
    try:
        k = next((k for k in range(3, n + 1) if exps[k - 1]), None)
        if k is not None:
            b = mono.split_by_variable(k)[0]
            if k == 4:
                return _d_y4(ring, b, mode, trace)
            tr = swap(ring, 4, k)
            b4 = b.substitute(tr.to_endomorphism().linear_images)
            return conjugate_letters(_d_y4(ring, b4, mode, trace), tr)
        # mono in K[y1, y2]: conjugate D(y4*b) by x4 -> x4 + x_k
        k = 1 if exps[0] else 2
        b = mono.split_by_variable(k)[0]
        y = ring.gens()
        w4 = _d_y4(ring, b, mode, trace)
        alpha = Elementary(4, 1, _gen(ring, k))
        rest_f = _com(ring, 1, 2, y[k - 1] * (y[3] + y[k - 1]) * b) * -1
        # D(y4 b)^alpha = D(y4 b) * D(yk b) * rest
        lhs = compose(compose(alpha.evaluate(), d_map(ring, y[3] * b, certify=False)),
                      alpha.inverse().evaluate())
        rhs = compose(compose(d_map(ring, y[3] * b, certify=False), d_map(ring, mono, certify=False)),
                      one_row(ring, 4, rest_f, certify=False))
        if lhs != rhs:
            raise CertificationError("conjugation identity for D(y_k*b) failed")
        w_rest = _row_map(ring, 4, rest_f, mode, trace)
        return invert_letters(w4) + [alpha] + w4 + [alpha.inverse()] + invert_letters(w_rest)
    finally:
        trace.leave()


def _d_letters(ring: Ring, a: Poly, mode: str, trace: _Trace) -> list[Letter]:
    letters: list[Letter] = []
    for exps, c in a.terms.items():
        letters.extend(_d_monomial(ring, ring.monomial(exps, c), mode, trace))
    return letters


def _d_checks(ring: Ring, a: Poly, mode: str, ctx: HypothesisContext):
    ctx.require(mode)
    threshold = 2 if mode == TAME else 1
    if a and a.ldeg < threshold:
        raise HypothesisError(f"D(a) in {mode} mode needs ldeg(a) >= {threshold}, got {a.ldeg}")


def decompose_D(ring: Ring, a: Poly, mode: str = TAME, ctx: HypothesisContext | None = None) -> GeneratorWord:
    """Word for D(a) = (x1 + [x1,x2]*y1*a, x2 + [x1,x2]*y2*a, x3, ..., xn)."""
    mode = _mode(mode)
    check_conventions()
    ctx = ctx or HypothesisContext.of(ring)
    _d_checks(ring, a, mode, ctx)
    trace = _Trace()
    letters = _d_letters(ring, a, mode, trace)
    return _word(ring, letters, mode, trace, d_map(ring, a), "D(a)")


# exponential automorphisms --------------------------------------------------------


def decompose_exponential(m: MagnusElement, mode: str = TAME,
                          ctx: HypothesisContext | None = None) -> GeneratorWord:
    """Word for E(m) = exp(ad m), m in M_n'.

    Each piece [x_i, x_j]*a is moved to [x1, x2]*a' by a permutation and
    E([x1,x2]*a') = D(a') * phi_3 * ... * phi_n with
    phi_k = (x_k + [x1,x2]*y_k*a').
    """
    mode = _mode(mode)
    check_conventions()
    ring = m.ring
    ctx = ctx or HypothesisContext.of(ring)
    ctx.require(mode)
    if not m.is_commutator():
        raise DomainError("E(m) needs m in [M_n, M_n]")
    threshold = 4 if mode == TAME else 3
    ldeg = element_degrees(m)[0]
    if m and ldeg < threshold:
        raise HypothesisError(f"E(m) in {mode} mode needs ldeg(m) >= {threshold}, got {ldeg}")
    trace = _Trace()
    letters: list[Letter] = []
    y = ring.gens()
    for (i, j), a in sorted(commutator_pairs(m).items()):
        perm = _pair_permutation(ring, (1, 2), (i, j))
        sigma = permutation_map(ring, perm)
        inv = {v: k for k, v in perm.items()}
        a1 = a.substitute([ring.var(inv[k]) for k in range(1, ring.n + 1)])
        local = _d_letters(ring, a1, mode, trace)
        for k in range(3, ring.n + 1):
            local.extend(_row_map(ring, k, _com(ring, 1, 2, y[k - 1] * a1), mode, trace))
        letters.extend(conjugate_letters(local, sigma))
    return _word(ring, letters, mode, trace, exponential_E(m), "E(m)")


# A(h, g) and B(h, f, g) ------------------------------------------------------------


class _AReduction:
    """State (h, g) with A_target = left * A(h, g) * right."""

    def __init__(self, ring: Ring, h: Poly, g: Poly, trace: _Trace):
        self.ring = ring
        self.h = h
        self.g = g
        self.left: list[Letter] = []
        self.right: list[Letter] = []
        self.trace = trace

    def A(self, h=None, g=None) -> Endomorphism:
        return a_map(self.ring, self.h if h is None else h, self.g if g is None else g, certify=False)

    def _verify(self, lhs: Endomorphism, rhs: Endomorphism, step: str):
        if lhs != rhs:
            raise CertificationError(f"A(h,g) reduction step {step} failed to verify")

    def linear_conjugation(self, letter: Elementary, step: str, shift=0):
        """A(h,g)^c = A(h^c, g^c - shift) for a linear elementary conjugator c."""
        c = letter.evaluate()
        h2 = c.subst(self.h)
        g2 = c.subst(self.g) - shift
        self._verify(compose(compose(c, self.A()), letter.inverse().evaluate()), self.A(h2, g2), step)
        self.left.append(letter.inverse())
        self.right.insert(0, letter)
        self.h, self.g = h2, g2

    def strip(self, i: int, a: Poly):
        """g -> g - y_i*a (3 <= i <= n-1) via A(h,g)^phi = A(h, g - y_i a)*psi."""
        if not a:
            return
        ring, n = self.ring, self.ring.n
        y = ring.gens()
        h, g = self.h, self.g
        g2 = g - y[i - 1] * a
        phi = Chein(1, _com(ring, 2, i, a) * -1)
        psi = [Chein(1, _com(ring, i, n, y[1] * a * h * g2)), Chein(2, _com(ring, i, n, y[1] * a * h) * -1)]
        psi = [l for l in psi if not l.is_identity()]
        lhs = compose(compose(phi.evaluate(), self.A()), phi.inverse().evaluate())
        rhs = compose(self.A(h, g2), word_evaluate(psi, ring)) if psi else self.A(h, g2)
        self._verify(lhs, rhs, "(b)")
        self.left.append(phi.inverse())
        self.right[:0] = psi + [phi]
        self.g = g2

    def shift_two_variable(self, k: int, c: Poly):
        """g = G(y1, y2)  ->  G + y_k*c for c in K[y1, y2], k in {1, 2}."""
        ring, n = self.ring, self.ring.n
        self.strip(3, -c)
        conj = Elementary(3, 1, _gen(ring, k))
        ce = conj.evaluate()
        h2, g2 = ce.subst(self.h), ce.subst(self.g)
        if k == 1:
            extra = [Chein(3, _com(ring, 1, n, h2 * g2) * -1), Chein(3, _com(ring, 2, n, h2 * g2 * g2) * -1)]
        else:
            extra = [Chein(3, _com(ring, 1, n, h2)), Chein(3, _com(ring, 2, n, h2 * g2))]
        extra = [l for l in extra if not l.is_identity()]
        lhs = compose(compose(ce, self.A()), conj.inverse().evaluate())
        rhs = compose(word_evaluate(extra, ring), self.A(h2, g2)) if extra else self.A(h2, g2)
        self._verify(lhs, rhs, "(d)")
        # A = conj^-1 * extra * A(h2, g2) * conj
        self.left.extend([conj.inverse()] + extra)
        self.right.insert(0, conj)
        self.h, self.g = h2, g2
        self.strip(3, c)

    def run(self) -> list[Letter]:
        ring, n = self.ring, self.ring.n
        if not self.h:
            return []
        # (a) kill the constant term of g
        lam = self.g.constant_term()
        if lam:
            self.trace.enter("A(a)", lam)
            self.linear_conjugation(Elementary(1, 1, _gen(ring, 2) * ring.field.norm(-lam)), "(a)", shift=lam)
            self.trace.leave()
        # (b) strip y_i multiples, 3 <= i <= n-1
        for i in range(3, n):
            q, _ = self.g.split_by_variable(i)
            if q:
                self.trace.enter("A(b)", i)
                self.strip(i, q)
                self.trace.leave()
        # (c) g = G(y1, y2) - y_n*b
        q, _ = self.g.split_by_variable(n)
        if q:
            self.trace.enter("A(c)", q.deg)
            b = -q
            self.strip(3, -b)
            self.linear_conjugation(Elementary(3, 1, _gen(ring, n)), "(c)")
            q3, _ = self.g.split_by_variable(3)
            self.strip(3, q3)
            self.trace.leave()
        # (d) kill the monomials of G(y1, y2) one at a time
        guard = 0
        while self.g:
            guard += 1
            if guard > 10_000:
                raise CertificationError("A(h,g) reduction did not terminate")
            exps, coeff = self.g.leading()
            if any(exps[2:]):
                raise CertificationError("A(h,g) reduction left variables outside y1, y2")
            k = 1 if exps[0] else 2
            if not exps[0] and not exps[1]:
                raise CertificationError("constant term reappeared in A(h,g) reduction")
            c = -ring.monomial(exps, coeff).split_by_variable(k)[0]
            self.trace.enter("A(d)", exps)
            self.shift_two_variable(k, c)
            self.trace.leave()
        core = Chein(2, _com(ring, 1, n, self.h) * -1)
        return self.left + [core] + self.right


def _require_almost(ring, ctx):
    ctx = ctx or HypothesisContext.of(ring)
    ctx.require(ALMOST_TAME)
    return ctx


def reduce_A(ring: Ring, h: Poly, g: Poly, ctx: HypothesisContext | None = None) -> GeneratorWord:
    """Almost tame word for A(h, g)."""
    check_conventions()
    _require_almost(ring, ctx)
    trace = _Trace()
    letters = _AReduction(ring, h, g, trace).run()
    return _word(ring, letters, ALMOST_TAME, trace, a_map(ring, h, g), "A(h,g)")


def _permute_poly(p: Poly, perm: dict[int, int]) -> Poly:
    ring = p.ring
    return p.substitute(permutation_map(ring, perm).to_endomorphism().linear_images)


def decompose_B(ring: Ring, h: Poly, f: Poly, g: Poly, ctx: HypothesisContext | None = None) -> GeneratorWord:
    """Almost tame word for B(h, f, g) = tau * (phi_1 * phi_2) * (psi_1 * psi_2)."""
    check_conventions()
    _require_almost(ring, ctx)
    n = ring.n
    trace = _Trace()
    target = b_map(ring, h, f, g)
    letters: list[Letter] = []
    if not target.is_identity():
        tau = Chein(3, _com(ring, 1, n, h * f) + _com(ring, 2, n, h * g))
        phi1 = Chein(2, (_com(ring, 1, n, h * f * f) + _com(ring, 3, n, h * f * f * g)) * -1)
        psi1 = Chein(1, _com(ring, 2, n, h * g * g) - _com(ring, 3, n, h * f * g * g))
        t23 = {2: 3, 3: 2}
        w_phi2 = conjugate_letters(
            _AReduction(ring, _permute_poly(h * f, t23), _permute_poly(g, t23), trace).run(),
            permutation_map(ring, t23))
        pi = PSI2_CONJUGATOR
        pi_inv = {v: k for k, v in pi.items()}
        w_psi2 = conjugate_letters(
            _AReduction(ring, _permute_poly(h * g, pi), -_permute_poly(f, pi), trace).run(),
            permutation_map(ring, pi_inv))
        letters = [tau, phi1] + w_phi2 + [psi1] + w_psi2
    return _word(ring, letters, ALMOST_TAME, trace, target, "B(h,f,g)")


def psi2_conjugator_candidates(ring: Ring, h: Poly, f: Poly, g: Poly) -> list[dict[int, int]]:
    """Permutations pi of {1,2,3} with psi_2^pi = A((hg)^pi, -f^pi); used to pin the constant."""
    from .endo import all_permutations, conjugate

    n = ring.n
    x = [_gen(ring, i) for i in range(1, n + 1)]
    images = list(x)
    images[1] = x[1] - _com(ring, 2, n, h * f * g) + _com(ring, 3, n, h * f * f * g)
    images[2] = x[2] - _com(ring, 2, n, h * g) + _com(ring, 3, n, h * f * g)
    psi2 = Endomorphism(ring, images)
    found = []
    for perm in all_permutations(ring, [1, 2, 3]):
        p = permutation_map(ring, perm)
        pe = p.to_endomorphism()
        if conjugate(psi2, pe, p.inverse().to_endomorphism()) == a_map(
                ring, _permute_poly(h * g, perm), -_permute_poly(f, perm), certify=False):
            found.append(perm)
    return found


# linear maps ---------------------------------------------------------------------


def linear_to_elementary(lmap: LinearMap) -> GeneratorWord:
    """Factor an invertible matrix into transvections and dilations.

    Column operations reduce M to I, M*E_1*...*E_k = I, so
    M = E_k^-1 * ... * E_1^-1.
    """
    ring = lmap.ring
    F = ring.field
    if not lmap.is_invertible():
        raise NotAnAutomorphismError("singular matrix")
    n = ring.n
    m = [list(r) for r in lmap.matrix]
    ops: list[Elementary] = []

    def col_op(target, alpha, source=None, c=0):
        # column target <- alpha*column target + c*column source
        for r in range(n):
            v = alpha * m[r][target]
            if source is not None:
                v += c * m[r][source]
            m[r][target] = F.norm(v)
        f = MagnusElement.zero(ring) if source is None else _gen(ring, source + 1) * c
        ops.append(Elementary(target + 1, alpha, f))

    for r in range(n):
        if not m[r][r]:
            c = next(c for c in range(r + 1, n) if m[r][c])
            col_op(r, 1, c, 1)
        if m[r][r] != 1:
            col_op(r, F.inv(m[r][r]))
        for j in range(n):
            if j != r and m[r][j]:
                col_op(j, 1, r, F.norm(-m[r][j]))
    letters = [op.inverse() for op in reversed(ops)]
    letters = [_explicit(l) for l in letters]
    return _word(ring, letters, TAME, None, lmap.to_endomorphism(), "linear map")


def _explicit(letter: Elementary) -> Elementary:
    """The inverse of an elementary letter written as a plain elementary letter."""
    if not letter.inverted:
        return letter
    F = letter.ring.field
    inv = F.inv(F(letter.alpha))
    return Elementary(letter.row, inv, letter.f * F.norm(-inv))


def permutation_to_elementary(ring: Ring, s: int, t: int) -> GeneratorWord:
    return linear_to_elementary(swap(ring, s, t))
