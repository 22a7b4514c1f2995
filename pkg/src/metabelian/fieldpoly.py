"""Exact coefficient fields and sparse polynomials in commuting variables y1..yn.

The polynomial ring ``U = K[y1, ..., yn]`` is the coefficient ring of the
commutator part of a free metabelian Lie algebra.  Everything here is exact:
rationals use :class:`fractions.Fraction` (integers are kept as ``int`` when the
denominator is 1), prime fields use canonical residues in ``[0, p)``.

Variable and generator indices in the public API are 1-based, matching the
usual ``y1, ..., yn`` notation.
"""

from __future__ import annotations

import heapq
import math
import random
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError, DomainError

MIN_VARS = 2
MAX_VARS = 16

POS_INF = math.inf
NEG_INF = -math.inf


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


class Field:
    """Either the rationals (``p is None``) or the prime field GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            p = int(p)
            if not _is_prime(p):
                raise DomainError(f"GF({p}): modulus must be prime")
        self.p = p

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @classmethod
    def gf(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def parse(cls, spec: str) -> "Field":
        """Parse ``q`` / ``Q`` / ``gf:<p>``."""
        s = spec.strip().lower()
        if s in ("q", "qq", "rationals"):
            return cls.rationals()
        if s.startswith("gf:") or s.startswith("gf("):
            digits = s[3:].rstrip(")")
            try:
                return cls.gf(int(digits))
            except ValueError:
                pass
        raise DomainError(f"unknown field {spec!r}; expected 'q' or 'gf:<p>'")

    @property
    def kind(self) -> str:
        return "rationals" if self.p is None else "prime_field"

    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def spec(self) -> str:
        return "q" if self.p is None else f"gf:{self.p}"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    # scalar arithmetic -------------------------------------------------

    def __call__(self, x) -> int | Fraction:
        """Coerce ``x`` (int, Fraction, or a ``"p/q"`` string) into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
            raise DomainError(f"cannot coerce {x!r} into {self!r}")
        if self.p is None:
            return self.norm(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise DomainError(f"{x} is not defined in {self!r}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return x % self.p

    def norm(self, c):
        if self.p is not None:
            return c % self.p
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c

    def inv(self, c):
        if c == 0:
            raise ZeroDivisionError(f"inverse of zero in {self!r}")
        if self.p is not None:
            return pow(c, -1, self.p)
        return self.norm(Fraction(1) / c)

    def div(self, a, b):
        return self.norm(a * self.inv(b))

    def format(self, c) -> str:
        return str(c)

    def random_element(self, rng: random.Random, nonzero: bool = False, bound: int = 3):
        while True:
            if self.p is None:
                num = rng.randint(-bound, bound)
                den = rng.choice((1, 1, 1, 2, 3))
                c = self.norm(Fraction(num, den))
            else:
                c = rng.randrange(self.p)
            if c != 0 or not nonzero:
                return c


QQ = Field.rationals()


# Exponent vectors are packed into one integer for multiplication, so that a
# monomial product is a single integer addition.
_SLOT = 20
_MASK = (1 << _SLOT) - 1


def pack(exps: tuple[int, ...]) -> int:
    k = 0
    for i, d in enumerate(exps):
        if d > _MASK:
            raise DomainError(f"exponent {d} exceeds the supported bound {_MASK}")
        k |= d << (_SLOT * i)
    return k


_SHIFTS = {n: tuple(_SLOT * i for i in range(n)) for n in range(1, 17)}
_UNPACKED: dict = {}


def unpack(k: int, n: int) -> tuple[int, ...]:
    key = (k, n)
    e = _UNPACKED.get(key)
    if e is None:
        if len(_UNPACKED) > 1_000_000:
            _UNPACKED.clear()
        e = _UNPACKED[key] = tuple([(k >> s) & _MASK for s in _SHIFTS[n]])
    return e


def grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class Ring:
    """The polynomial ring K[y1, ..., yn] for a fixed field and variable count."""

    __slots__ = ("n", "field", "_zero_exp")

    def __init__(self, n: int, field: Field | None = None):
        n = int(n)
        if not MIN_VARS <= n <= MAX_VARS:
            raise DomainError(f"variable count must lie in [{MIN_VARS}, {MAX_VARS}], got {n}")
        self.n = n
        self.field = field if field is not None else QQ
        self._zero_exp = (0,) * n

    def __eq__(self, other):
        return isinstance(other, Ring) and other.n == self.n and other.field == self.field

    def __hash__(self):
        return hash(("Ring", self.n, self.field))

    def __repr__(self):
        return f"Ring(n={self.n}, field={self.field!r})"

    def check_index(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise DomainError(f"index {i} out of range 1..{self.n}")
        return i

    @property
    def zero(self) -> "Poly":
        return Poly(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = self.field(c)
        return Poly(self, {self._zero_exp: c} if c else {})

    def var(self, i: int) -> "Poly":
        self.check_index(i)
        e = [0] * self.n
        e[i - 1] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self) -> tuple["Poly", ...]:
        return tuple(self.var(i) for i in range(1, self.n + 1))

    def monomial(self, exps: Sequence[int], coeff=1) -> "Poly":
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.n or any(e < 0 for e in exps):
            raise DimensionError(f"bad exponent vector {exps} for n={self.n}")
        c = self.field(coeff)
        return Poly(self, {exps: c} if c else {})

    def linear_form(self, coeffs: Sequence) -> "Poly":
        """sum_i coeffs[i] * y_{i+1}"""
        if len(coeffs) != self.n:
            raise DimensionError("linear form needs n coefficients")
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * self.n
                e[i] = 1
                terms[tuple(e)] = c
        return Poly(self, terms)

    def from_dict(self, terms: Mapping[tuple[int, ...], object]) -> "Poly":
        out = {}
        F = self.field
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != self.n or any(x < 0 for x in e):
                raise DimensionError(f"bad exponent vector {e} for n={self.n}")
            c = F(c)
            if c:
                out[e] = F.norm(out.get(e, 0) + c)
                if not out[e]:
                    del out[e]
        return Poly(self, out)

    def exponents_of_degree(self, k: int) -> Iterable[tuple[int, ...]]:
        for combo in combinations_with_replacement(range(self.n), k):
            e = [0] * self.n
            for i in combo:
                e[i] += 1
            yield tuple(e)

    def random_poly(self, rng: random.Random, max_deg: int = 3, min_deg: int = 0,
                    terms: int = 3, variables: Sequence[int] | None = None) -> "Poly":
        """A random polynomial with at most ``terms`` monomials of degree in [min_deg, max_deg].

        ``variables`` (1-based) restricts the support.
        """
        allowed = None if variables is None else {v - 1 for v in variables}
        out = {}
        for _ in range(terms):
            d = rng.randint(min_deg, max_deg)
            e = [0] * self.n
            for _ in range(d):
                slot = rng.randrange(self.n) if allowed is None else rng.choice(sorted(allowed))
                e[slot] += 1
            c = self.field.random_element(rng, nonzero=True)
            e = tuple(e)
            out[e] = self.field.norm(out.get(e, 0) + c)
            if not out[e]:
                del out[e]
        return Poly(self, out)


class Poly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to nonzero coefficients.

    ``terms`` iterates in descending graded-lexicographic order; arithmetic
    works on the unordered dict and sorts only on demand.
    """

    __slots__ = ("ring", "_raw", "_sorted", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple[int, ...], object]):
        self.ring = ring
        # callers guarantee normalized nonzero coefficients
        self._raw = terms if type(terms) is dict else dict(terms)
        self._sorted = None
        self._hash = None

    @property
    def terms(self) -> dict:
        if self._sorted is None:
            self._sorted = dict(sorted(self._raw.items(), key=lambda kv: grlex_key(kv[0]), reverse=True))
        return self._sorted

    # basic protocol ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self._raw == other._raw
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._raw.items())))
        return self._hash

    def __bool__(self):
        return bool(self._raw)

    def __len__(self):
        return len(self._raw)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)

    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise DimensionError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring.const(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    # arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        norm = self.ring.field.norm
        out = dict(self._raw)
        for e, c in other._raw.items():
            v = norm(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        norm = self.ring.field.norm
        return Poly(self.ring, {e: norm(-c) for e, c in self._raw.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if not self._raw or not other._raw:
            return Poly(self.ring, {})
        if self.deg + other.deg > _MASK:
            raise DomainError(f"product degree exceeds the supported bound {_MASK}")
        norm = self.ring.field.norm
        out: dict = {}
        get = out.get
        left = [(pack(e), c) for e, c in self._raw.items()]
        right = [(pack(e), c) for e, c in other._raw.items()]
        for k1, c1 in left:
            for k2, c2 in right:
                k = k1 + k2
                out[k] = get(k, 0) + c1 * c2
        n = self.ring.n
        res = {}
        for k, c in out.items():
            c = norm(c)
            if c:
                res[unpack(k, n)] = c
        return Poly(self.ring, res)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        F = self.ring.field
        c = F(c)
        if not c:
            return Poly(self.ring, {})
        return Poly(self.ring, {e: F.norm(v * c) for e, v in self._raw.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, exps: tuple[int, ...], coeff=1) -> "Poly":
        norm = self.ring.field.norm
        out = {}
        for e, c in self._raw.items():
            v = norm(c * coeff)
            if v:
                out[tuple(a + b for a, b in zip(e, exps))] = v
        return Poly(self.ring, out)

    # structure ---------------------------------------------------------

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._raw)

    def constant_term(self):
        return self._raw.get(self.ring._zero_exp, 0)

    def coefficient(self, exps: Sequence[int]):
        return self._raw.get(tuple(exps), 0)

    def degrees(self) -> tuple[float | int, float | int]:
        """(ldeg, deg) in total degree; (+inf, -inf) for the zero polynomial."""
        if not self._raw:
            return POS_INF, NEG_INF
        ds = [sum(e) for e in self._raw]
        return min(ds), max(ds)

    @property
    def ldeg(self):
        return self.degrees()[0]

    @property
    def deg(self):
        return self.degrees()[1]

    def homogeneous_part(self, k: int) -> "Poly":
        return Poly(self.ring, {e: c for e, c in self._raw.items() if sum(e) == k})

    def monomials(self) -> list[tuple[tuple[int, ...], object]]:
        return list(self.terms.items())

    def variables(self) -> set[int]:
        """1-based indices of the variables that occur."""
        return {i + 1 for e in self._raw for i, x in enumerate(e) if x}

    def split_by_variable(self, i: int) -> tuple["Poly", "Poly"]:
        """Return (q, r) with self = y_i*q + r and r free of y_i."""
        self.ring.check_index(i)
        k = i - 1
        q, r = {}, {}
        for e, c in self._raw.items():
            if e[k]:
                q[e[:k] + (e[k] - 1,) + e[k + 1:]] = c
            else:
                r[e] = c
        return Poly(self.ring, q), Poly(self.ring, r)

    def set_zero(self, indices: Iterable[int]) -> "Poly":
        """Substitute y_i = 0 for the given 1-based indices."""
        idx = [i - 1 for i in indices]
        return Poly(self.ring, {e: c for e, c in self._raw.items() if not any(e[k] for k in idx)})

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Simultaneous substitution y_i -> images[i-1]."""
        if len(images) != self.ring.n:
            raise DimensionError(f"substitution needs {self.ring.n} images, got {len(images)}")
        for im in images:
            self._check(im)
        ring = self.ring
        if not self._raw:
            return ring.zero
        powers: list[dict[int, Poly]] = [{0: ring.one} for _ in range(ring.n)]

        def power(k, d):
            cache = powers[k]
            if d not in cache:
                best = max(j for j in cache if j < d)
                p = cache[best]
                for j in range(best + 1, d + 1):
                    p = p * images[k]
                    cache[j] = p
            return cache[d]

        acc: dict = {}
        norm = ring.field.norm
        for e, c in self._raw.items():
            term = None
            for k, d in enumerate(e):
                if d:
                    p = power(k, d)
                    term = p if term is None else term * p
            if term is None:
                acc[ring._zero_exp] = acc.get(ring._zero_exp, 0) + c
            else:
                for e2, c2 in term._raw.items():
                    acc[e2] = acc.get(e2, 0) + c * c2
        out = {}
        for e, c in acc.items():
            c = norm(c)
            if c:
                out[e] = c
        return Poly(ring, out)

    def leading(self) -> tuple[tuple[int, ...], object]:
        if not self._raw:
            raise DomainError("zero polynomial has no leading term")
        e = max(self._raw, key=grlex_key)
        return e, self._raw[e]

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient of an exact division; raises DomainError if other does not divide self."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        F = self.ring.field
        norm = F.norm
        le, lc = other.leading()
        inv_lc = F.inv(lc)
        rem = dict(self._raw)
        heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
        heapq.heapify(heap)
        quot: dict = {}
        while heap:
            _, neg = heapq.heappop(heap)
            e = tuple(-x for x in neg)
            c = rem.get(e)
            if not c:
                continue
            diff = tuple(a - b for a, b in zip(e, le))
            if any(x < 0 for x in diff):
                raise DomainError(f"{other} does not divide {self}")
            qc = norm(c * inv_lc)
            quot[diff] = qc
            for e2, c2 in other._raw.items():
                k = tuple(a + b for a, b in zip(e2, diff))
                v = norm(rem.get(k, 0) - qc * c2)
                if v:
                    if k not in rem:
                        heapq.heappush(heap, (-sum(k), tuple(-x for x in k)))
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return Poly(self.ring, quot)


def format_monomial(exps: Sequence[int], var: str = "y") -> str:
    parts = []
    for i, d in enumerate(exps):
        if d == 1:
            parts.append(f"{var}{i + 1}")
        elif d > 1:
            parts.append(f"{var}{i + 1}^{d}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    out = []
    for idx, (e, c) in enumerate(p.terms.items()):
        neg = c < 0
        mag = -c if neg else c
        mono = format_monomial(e)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# functional API -------------------------------------------------------------


def poly_arith(lhs: Poly, rhs: Poly, op: str) -> Poly:
    lhs._check(rhs)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise DomainError(f"unknown operation {op!r}")


def poly_substitute(p: Poly, images: Sequence[Poly]) -> Poly:
    return p.substitute(images)


def poly_degrees(p: Poly):
    return p.degrees()


def poly_split_by_variable(p: Poly, i: int) -> tuple[Poly, Poly]:
    return p.split_by_variable(i)
