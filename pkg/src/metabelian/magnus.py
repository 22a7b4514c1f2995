"""Elements of the free metabelian Lie algebra M_n in Magnus coordinates.

M_n sits inside ``Y_n + T_n`` where ``Y_n`` is abelian with basis y1..yn and
``T_n`` is the free right U-module on t1..tn, ``U = K[y1..yn]``.  A generator is
``x_i = y_i + t_i`` and the bracket is

    [a + t, b + s] = t*b - s*a        (a, b in Y_n;  t, s in T_n)

so an element is stored as a linear part (coefficients of the y_i) and a
module part (the polynomial coordinates of the t_i), which are exactly its
Fox derivatives.  The commutator ideal M_n' lies in T_n and is the set of
elements with zero linear part; for m in M_n', ``m*y_i = [m, x_i]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DimensionError, DomainError, NotADerivativeError
from .fieldpoly import NEG_INF, POS_INF, Poly, Ring, format_monomial

Pair = tuple[int, int]


class MagnusElement:
    __slots__ = ("ring", "linear", "module", "_hash")

    def __init__(self, ring: Ring, linear: Sequence, module: Sequence[Poly], check: bool = True):
        if len(linear) != ring.n or len(module) != ring.n:
            raise DimensionError(f"element of M_{ring.n} needs {ring.n} linear and {ring.n} module coordinates")
        self.ring = ring
        self.linear = tuple(ring.field(c) for c in linear)
        self.module = tuple(module)
        self._hash = None
        if check:
            for d in self.module:
                if d.ring != ring:
                    raise DimensionError("module coordinate over the wrong ring")
            if contract(ring, self.module) != ring.linear_form(self.linear):
                raise DomainError("coordinates do not describe an element of M_n "
                                  "(sum y_i*d_i must equal the linear part)")

    # constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring) -> "MagnusElement":
        return cls(ring, (0,) * ring.n, (ring.zero,) * ring.n, check=False)

    @classmethod
    def generator(cls, ring: Ring, i: int) -> "MagnusElement":
        ring.check_index(i)
        lin = [0] * ring.n
        lin[i - 1] = 1
        mod = [ring.zero] * ring.n
        mod[i - 1] = ring.one
        return cls(ring, lin, mod, check=False)

    @classmethod
    def from_linear(cls, ring: Ring, coeffs: Sequence) -> "MagnusElement":
        """sum_i coeffs[i] * x_{i+1}"""
        coeffs = [ring.field(c) for c in coeffs]
        return cls(ring, coeffs, [ring.const(c) for c in coeffs], check=False)

    @classmethod
    def from_pairs(cls, ring: Ring, pairs: Mapping[Pair, Poly]) -> "MagnusElement":
        """sum over (i, j) of [x_i, x_j] * pairs[(i, j)] (1-based indices)."""
        mod = [ring.zero] * ring.n
        for (i, j), a in pairs.items():
            ring.check_index(i)
            ring.check_index(j)
            if i == j or not a:
                continue
            mod[i - 1] = mod[i - 1] + ring.var(j) * a
            mod[j - 1] = mod[j - 1] - ring.var(i) * a
        return cls(ring, (0,) * ring.n, mod, check=False)

    @classmethod
    def commutator(cls, ring: Ring, i: int, j: int, a: Poly | None = None) -> "MagnusElement":
        """[x_i, x_j] * a"""
        return cls.from_pairs(ring, {(i, j): ring.one if a is None else a})

    # protocol ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MagnusElement):
            return NotImplemented
        return self.ring == other.ring and self.linear == other.linear and self.module == other.module

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.linear, self.module))
        return self._hash

    def __bool__(self):
        return any(self.linear) or any(self.module)

    def __repr__(self):
        return f"MagnusElement({self})"

    def __str__(self):
        return str(to_basis(self))

    def _check(self, other: "MagnusElement"):
        if self.ring != other.ring:
            raise DimensionError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    # linear structure --------------------------------------------------

    def __add__(self, other: "MagnusElement") -> "MagnusElement":
        self._check(other)
        norm = self.ring.field.norm
        return MagnusElement(self.ring,
                             [norm(a + b) for a, b in zip(self.linear, other.linear)],
                             [a + b for a, b in zip(self.module, other.module)], check=False)

    def __neg__(self) -> "MagnusElement":
        norm = self.ring.field.norm
        return MagnusElement(self.ring, [norm(-a) for a in self.linear],
                             [-a for a in self.module], check=False)

    def __sub__(self, other: "MagnusElement") -> "MagnusElement":
        return self + (-other)

    def __mul__(self, other):
        """Scalar multiple, or the module action of U on M_n' for a Poly."""
        if isinstance(other, Poly):
            return module_scale(self, other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            F = self.ring.field
            c = F(other)
            return MagnusElement(self.ring, [F.norm(a * c) for a in self.linear],
                                 [d.scale(c) for d in self.module], check=False)
        return NotImplemented

    __rmul__ = __mul__

    # structure ---------------------------------------------------------

    def is_commutator(self) -> bool:
        """True iff the element lies in M_n' = [M_n, M_n]."""
        return not any(self.linear)

    def linear_poly(self) -> Poly:
        """The image sum lambda_i*y_i of the element in Y_n, viewed in U."""
        return self.ring.linear_form(self.linear)

    def linear_part(self) -> "MagnusElement":
        return MagnusElement.from_linear(self.ring, self.linear)

    def commutator_part(self) -> "MagnusElement":
        ring = self.ring
        return MagnusElement(ring, (0,) * ring.n,
                             [d - ring.const(c) for d, c in zip(self.module, self.linear)], check=False)

    def degrees(self):
        return element_degrees(self)


@dataclass(frozen=True)
class JacobianColumn:
    """A column of n polynomials; the Fox derivatives of an element."""

    entries: tuple[Poly, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    @property
    def ring(self) -> Ring:
        return self.entries[0].ring

    def y_contract(self) -> Poly:
        """Y*a = y1*a1 + ... + yn*an."""
        return contract(self.ring, self.entries)

    def is_derivative(self) -> bool:
        return not self.y_contract()


def contract(ring: Ring, column: Sequence[Poly]) -> Poly:
    total = ring.zero
    for i, d in enumerate(column):
        if d:
            total = total + ring.var(i + 1) * d
    return total


# operations -----------------------------------------------------------------


def bracket(u: MagnusElement, v: MagnusElement) -> MagnusElement:
    """[a + t, b + s] = t*b - s*a."""
    u._check(v)
    ring = u.ring
    a = u.linear_poly()
    b = v.linear_poly()
    mod = []
    for t, s in zip(u.module, v.module):
        mod.append(t * b - s * a)
    return MagnusElement(ring, (0,) * ring.n, mod, check=False)


def module_scale(m: MagnusElement, u: Poly) -> MagnusElement:
    """m*u for m in M_n' (coordinatewise multiplication of the module part)."""
    if m.ring != u.ring:
        raise DimensionError("ring mismatch in module_scale")
    if not m.is_commutator():
        if u.is_constant():
            return m * u.constant_term()
        raise DomainError("module action by U is only defined on M_n' (nonzero linear part)")
    return MagnusElement(m.ring, m.linear, [d * u for d in m.module], check=False)


def fox_derivatives(f: MagnusElement) -> JacobianColumn:
    return JacobianColumn(f.module)


def lift_pairs(column: Sequence[Poly] | JacobianColumn) -> dict[Pair, Poly]:
    """Coefficients a_ij (i < j) with sum_{i<j} (e_i*y_j - e_j*y_i)*a_ij = column.

    Eliminates y_n, y_{n-1}, ..., y_2 in turn: at step k every entry a_i with
    i < k is split as a_i = y_k*q_i + r_i, the term [x_i, x_k]*q_i is recorded,
    and the k-th entry is cancelled.  Raises NotADerivativeError when Y*a != 0.
    """
    entries = list(column)
    if not entries:
        raise DimensionError("empty column")
    ring = entries[0].ring
    if len(entries) != ring.n:
        raise DimensionError(f"column of length {len(entries)} over n={ring.n}")
    if contract(ring, entries):
        raise NotADerivativeError("column is not a Fox derivative: Y*a != 0")
    pairs: dict[Pair, Poly] = {}
    for k in range(ring.n, 1, -1):
        residue = entries[k - 1]
        for i in range(1, k):
            q, r = entries[i - 1].split_by_variable(k)
            if q:
                pairs[(i, k)] = q
                residue = residue + ring.var(i) * q
            entries[i - 1] = r
        if residue:
            raise NotADerivativeError(f"elimination of y{k} left a nonzero remainder")
        entries[k - 1] = ring.zero
    if entries[0]:
        raise NotADerivativeError("first coordinate did not vanish")
    return pairs


def lift_column(column: Sequence[Poly] | JacobianColumn) -> MagnusElement:
    """The unique f in M_n' whose Fox derivatives are ``column``."""
    entries = tuple(column)
    pairs = lift_pairs(entries)
    ring = entries[0].ring
    f = MagnusElement.from_pairs(ring, pairs)
    if f.module != entries:
        raise NotADerivativeError("lift does not reproduce the column")
    return f


def commutator_pairs(f: MagnusElement) -> dict[Pair, Poly]:
    """Write the commutator part of f as sum_{i<j} [x_i, x_j]*a_ij."""
    return lift_pairs(f.commutator_part().module)


def element_degrees(f: MagnusElement):
    """(ldeg, deg) for the grading by x-degree; (inf, -inf) for zero."""
    degs = []
    if any(f.linear):
        degs.append(1)
    for d in f.commutator_part().module:
        if d:
            lo, hi = d.degrees()
            degs.extend((lo + 1, hi + 1))
    if not degs:
        return POS_INF, NEG_INF
    return min(degs), max(degs)


# right-normed basis -----------------------------------------------------------


@dataclass(frozen=True)
class BasisCombination:
    """sum of linear terms and right-normed monomials [...[[x_h, x_i1], x_i2], ..., x_ik]
    with h > i1 <= i2 <= ... <= ik.

    ``terms`` holds (coefficient, head, tail) triples, sorted and with nonzero
    coefficients.
    """

    ring: Ring
    linear: tuple
    terms: tuple[tuple[object, int, tuple[int, ...]], ...]

    def __post_init__(self):
        for c, head, tail in self.terms:
            if not tail or head <= tail[0] or list(tail) != sorted(tail) or not c:
                raise DomainError(f"({head}, {tail}) is not a basis monomial")

    def __str__(self):
        parts = []
        for i, c in enumerate(self.linear):
            if c:
                parts.append((c, f"x{i + 1}"))
        for c, head, tail in self.terms:
            parts.append((c, right_normed(head, tail)))
        return join_terms(parts)

    def evaluate(self) -> MagnusElement:
        return eval_basis(self)


def right_normed(head: int, tail: Sequence[int]) -> str:
    s = f"x{head}"
    for t in tail:
        s = f"[{s},x{t}]"
    return s


def join_terms(parts) -> str:
    """Render (coefficient, body) pairs as a signed sum."""
    if not parts:
        return "0"
    out = []
    for idx, (c, body) in enumerate(parts):
        neg = c < 0
        mag = -c if neg else c
        text = body if mag == 1 else f"{mag}*{body}"
        if idx == 0:
            out.append(("-" if neg else "") + text)
        else:
            out.append((" - " if neg else " + ") + text)
    return "".join(out)


def _tail_exps(n: int, tail: Sequence[int]) -> tuple[int, ...]:
    e = [0] * n
    for t in tail:
        e[t - 1] += 1
    return tuple(e)


def eval_basis(bc: BasisCombination) -> MagnusElement:
    ring = bc.ring
    pairs: dict[Pair, Poly] = {}
    for c, head, tail in bc.terms:
        mono = ring.monomial(_tail_exps(ring.n, tail[1:]), c)
        key = (head, tail[0])
        pairs[key] = pairs.get(key, ring.zero) + mono
    return MagnusElement.from_linear(ring, bc.linear) + MagnusElement.from_pairs(ring, pairs)


def to_basis(f: MagnusElement) -> BasisCombination:
    """Express f in the right-normed basis.

    Each [x_i, x_j]*y^b (i < j) becomes -[x_j, x_i]*y^b; when b contains an
    index m below the second bracket index l, one Jacobi rewrite

        [x_h, x_l]*y_m = [x_h, x_m]*y_l - [x_l, x_m]*y_h

    moves the smallest index into the bracket and leaves basis monomials.
    """
    ring = f.ring
    norm = ring.field.norm
    acc: dict[tuple[int, tuple[int, ...]], object] = {}

    def emit(c, h, l, exps):
        tail = [l]
        for k, d in enumerate(exps):
            tail.extend([k + 1] * d)
        key = (h, tuple(tail))
        v = norm(acc.get(key, 0) + c)
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)

    for (i, j), a in commutator_pairs(f).items():
        h, l = j, i
        for exps, c in a.terms.items():
            c = norm(-c)
            support = [k for k, d in enumerate(exps) if d]
            m = support[0] + 1 if support else None
            if m is None or m >= l:
                emit(c, h, l, exps)
                continue
            e = list(exps)
            e[m - 1] -= 1
            e1 = list(e)
            e1[l - 1] += 1
            emit(c, h, m, e1)
            e2 = list(e)
            e2[h - 1] += 1
            emit(norm(-c), l, m, e2)
    terms = tuple(sorted(((c, h, tail) for (h, tail), c in acc.items()),
                         key=lambda t: (len(t[2]), t[2], t[1])))
    return BasisCombination(ring, f.linear, terms)


# expression trees -------------------------------------------------------------


class LieExpr:
    """Base class of the small expression language for elements of M_n."""

    def evaluate(self, ring: Ring) -> MagnusElement:
        return eval_lie_expr(self, ring)


@dataclass(frozen=True)
class Gen(LieExpr):
    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class Bracket(LieExpr):
    left: LieExpr
    right: LieExpr

    def __str__(self):
        return f"[{self.left},{self.right}]"


@dataclass(frozen=True)
class Scale(LieExpr):
    coeff: object
    expr: LieExpr

    def __str__(self):
        return f"{self.coeff}*({self.expr})"


@dataclass(frozen=True)
class Sum(LieExpr):
    items: tuple[LieExpr, ...]

    def __str__(self):
        return " + ".join(f"({e})" for e in self.items) or "0"


@dataclass(frozen=True)
class PolyMul(LieExpr):
    """expr * poly, where poly acts through the U-module structure of M_n'."""

    expr: LieExpr
    poly: object  # Poly, or a callable ring -> Poly for ring-independent trees

    def __str__(self):
        return f"({self.expr})*({self.poly})"


def eval_lie_expr(e: LieExpr, ring: Ring) -> MagnusElement:
    if isinstance(e, Gen):
        if not 1 <= e.index <= ring.n:
            raise DomainError(f"generator x{e.index} out of range for n={ring.n}")
        return MagnusElement.generator(ring, e.index)
    if isinstance(e, Bracket):
        return bracket(eval_lie_expr(e.left, ring), eval_lie_expr(e.right, ring))
    if isinstance(e, Scale):
        return eval_lie_expr(e.expr, ring) * ring.field(e.coeff)
    if isinstance(e, Sum):
        total = MagnusElement.zero(ring)
        for item in e.items:
            total = total + eval_lie_expr(item, ring)
        return total
    if isinstance(e, PolyMul):
        poly = e.poly(ring) if callable(e.poly) else e.poly
        return module_scale(eval_lie_expr(e.expr, ring), poly)
    raise TypeError(f"not a Lie expression: {e!r}")


def format_pairs(ring: Ring, pairs: Mapping[Pair, Poly]) -> str:
    """Compact rendering sum [x_i,x_j]*a_ij, used in diagnostics."""
    parts = []
    for (i, j), a in sorted(pairs.items()):
        for exps, c in a.terms.items():
            mono = format_monomial(exps)
            parts.append((c, f"[x{i},x{j}]" + (f"*{mono}" if mono else "")))
    return join_terms(parts)
