"""Endomorphisms and automorphisms of M_n.

An endomorphism is the tuple of images (f_1, ..., f_n) of the generators.
Products follow the convention

    phi*psi = (g_1(f_1, ..., f_n), ..., g_n(f_1, ..., f_n))

for phi = (f_i), psi = (g_i), i.e. ``compose(phi, psi)(x) = phi(psi(x))``.
Conjugation is ``phi^psi = psi*phi*psi^-1`` and the commutator is
``[phi, psi] = phi*psi*phi^-1*psi^-1``.
"""

from __future__ import annotations

from functools import cached_property
from itertools import permutations
from typing import Sequence

from .errors import (CertificationError, DimensionError, DomainError,
                     NotAnAutomorphismError)
from .fieldpoly import NEG_INF, POS_INF, Poly, Ring, pack, unpack
from .magnus import (MagnusElement, bracket, commutator_pairs, element_degrees,
                     fox_derivatives, lift_column, module_scale)

# polynomial matrices ----------------------------------------------------------


class PolyMatrix:
    """Square matrix over U, stored row-major."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring: Ring, rows: Sequence[Sequence[Poly]]):
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        if any(len(r) != len(self.rows) for r in self.rows):
            raise DimensionError("matrix must be square")

    @classmethod
    def identity(cls, ring: Ring) -> "PolyMatrix":
        n = ring.n
        return cls(ring, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, ring: Ring, columns: Sequence[Sequence[Poly]]) -> "PolyMatrix":
        n = len(columns)
        return cls(ring, [[columns[j][i] for j in range(n)] for i in range(n)])

    @property
    def size(self) -> int:
        return len(self.rows)

    def column(self, j: int) -> tuple[Poly, ...]:
        return tuple(r[j] for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "PolyMatrix([" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.rows) + "])"

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        n = self.size
        if other.size != n:
            raise DimensionError("matrix size mismatch")
        cols = [other.column(j) for j in range(n)]
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = self.ring.zero
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, out)

    def substitute(self, images: Sequence[Poly]) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[a.substitute(images) for a in r] for r in self.rows])

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[a.scale(c) for a in r] for r in self.rows])

    def minor(self, i: int, j: int) -> "PolyMatrix":
        return PolyMatrix(self.ring, [r[:j] + r[j + 1:] for k, r in enumerate(self.rows) if k != i])

    def det(self) -> Poly:
        return bareiss_det(self.ring, [list(r) for r in self.rows])

    def adjugate(self) -> "PolyMatrix":
        n = self.size
        if n == 1:
            return PolyMatrix(self.ring, [[self.ring.one]])
        cof = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                d = self.minor(i, j).det()
                cof[j][i] = -d if (i + j) % 2 else d
        return PolyMatrix(self.ring, cof)


def series_inverse(mat: "PolyMatrix") -> "PolyMatrix | None":
    """Inverse of I + A with A(0) = 0, or None when it is not a polynomial matrix.

    The inverse is the series sum_k (-A)^k, summed one homogeneous degree at a
    time: with A = A_1 + ... + A_d, the degree-k part C_k of the inverse obeys
    C_k = -(A_1 C_{k-1} + ... + A_d C_{k-d}).  Each C_k is an exact component
    of the answer, so there is no intermediate expression swell.  Once d
    consecutive components vanish every later one does too; an inverse over U
    has degree at most (n-1)*d, which bounds the search.
    """
    ring = mat.ring
    n = mat.size
    zero = ring.zero
    a = [[mat.rows[i][j] - (ring.one if i == j else zero) for j in range(n)] for i in range(n)]
    if any(e.constant_term() for row in a for e in row):
        return None
    d = max((e.deg for row in a for e in row if e), default=0)
    if d == 0:
        return PolyMatrix.identity(ring)
    parts = [None] + [[[e.homogeneous_part(k) for e in row] for row in a] for k in range(1, d + 1)]
    nonzero = [None] + [[(i, l, row[l]) for i, row in enumerate(pk) for l in range(n) if row[l]]
                        for pk in parts[1:]]
    comps = [[[ring.one if i == j else zero for j in range(n)] for i in range(n)]]
    limit = (n - 1) * d
    quiet = 0
    k = 0
    while quiet < d:
        k += 1
        if k > limit + d:
            return None
        acc = [[{} for _ in range(n)] for _ in range(n)]
        for j in range(1, min(d, k) + 1):
            prev = comps[k - j]
            for i, l, e in nonzero[j]:
                row = prev[l]
                for col in range(n):
                    if row[col]:
                        _accumulate(acc[i][col], e, row[col])
        norm = ring.field.norm
        ck = [[Poly(ring, {unpack(m, n): v for m, v in ((m, norm(-v)) for m, v in cell.items()) if v})
               for cell in r] for r in acc]
        comps.append(ck)
        quiet = quiet + 1 if not any(e for r in ck for e in r) else 0
    total = [[zero] * n for _ in range(n)]
    for ck in comps:
        for i in range(n):
            for j in range(n):
                if ck[i][j]:
                    total[i][j] = total[i][j] + ck[i][j]
    return PolyMatrix(ring, total)


def _accumulate(cell: dict, p: Poly, q: Poly) -> None:
    """cell += p*q on packed exponent keys."""
    get = cell.get
    right = [(pack(e), c) for e, c in q._raw.items()]
    for e1, c1 in p._raw.items():
        k1 = pack(e1)
        for k2, c2 in right:
            k = k1 + k2
            cell[k] = get(k, 0) + c1 * c2


def bareiss_det(ring: Ring, m: list[list[Poly]]) -> Poly:
    """Fraction-free Gaussian elimination; every division is exact."""
    n = len(m)
    if n == 0:
        return ring.one
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ring.zero
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = num if prev == ring.one else num.exact_div(prev)
            m[i][k] = ring.zero
        prev = pivot
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


# linear maps ------------------------------------------------------------------


class LinearMap:
    """An n x n scalar matrix; column j holds the coefficients of the image of x_j."""

    __slots__ = ("ring", "matrix")

    def __init__(self, ring: Ring, matrix: Sequence[Sequence]):
        F = ring.field
        m = tuple(tuple(F(c) for c in row) for row in matrix)
        if len(m) != ring.n or any(len(r) != ring.n for r in m):
            raise DimensionError(f"linear map needs an {ring.n}x{ring.n} matrix")
        self.ring = ring
        self.matrix = m

    @classmethod
    def identity(cls, ring: Ring) -> "LinearMap":
        n = ring.n
        return cls(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def permutation(cls, ring: Ring, perm: dict[int, int]) -> "LinearMap":
        """x_k -> x_perm[k] (1-based, unmentioned indices fixed)."""
        n = ring.n
        m = [[0] * n for _ in range(n)]
        for k in range(1, n + 1):
            m[perm.get(k, k) - 1][k - 1] = 1
        return cls(ring, m)

    @classmethod
    def diagonal(cls, ring: Ring, scales: Sequence) -> "LinearMap":
        n = ring.n
        return cls(ring, [[scales[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        return isinstance(other, LinearMap) and self.ring == other.ring and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.ring, self.matrix))

    def __repr__(self):
        return f"LinearMap({[list(r) for r in self.matrix]})"

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        n = self.ring.n
        norm = self.ring.field.norm
        a, b = self.matrix, other.matrix
        return LinearMap(self.ring, [[norm(sum(a[i][k] * b[k][j] for k in range(n))) for j in range(n)]
                                     for i in range(n)])

    def det(self):
        F = self.ring.field
        m = [list(r) for r in self.matrix]
        n = len(m)
        det = 1
        for k in range(n):
            piv = next((i for i in range(k, n) if m[i][k]), None)
            if piv is None:
                return 0
            if piv != k:
                m[k], m[piv] = m[piv], m[k]
                det = -det
            det = F.norm(det * m[k][k])
            inv = F.inv(m[k][k])
            for i in range(k + 1, n):
                if m[i][k]:
                    f = F.norm(m[i][k] * inv)
                    m[i] = [F.norm(a - f * b) for a, b in zip(m[i], m[k])]
        return F.norm(det)

    def is_invertible(self) -> bool:
        return self.det() != 0

    def inverse(self) -> "LinearMap":
        """Gauss-Jordan elimination over K."""
        F = self.ring.field
        n = self.ring.n
        m = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.matrix)]
        for k in range(n):
            piv = next((i for i in range(k, n) if m[i][k]), None)
            if piv is None:
                raise NotAnAutomorphismError("singular linear map")
            m[k], m[piv] = m[piv], m[k]
            inv = F.inv(m[k][k])
            m[k] = [F.norm(a * inv) for a in m[k]]
            for i in range(n):
                if i != k and m[i][k]:
                    f = m[i][k]
                    m[i] = [F.norm(a - f * b) for a, b in zip(m[i], m[k])]
        return LinearMap(self.ring, [r[n:] for r in m])

    def monomial_form(self) -> tuple[dict[int, int], list] | None:
        """(perm, scales) with x_k -> scales[k-1]*x_perm[k] when the matrix is monomial."""
        n = self.ring.n
        perm, scales = {}, []
        for j in range(n):
            nz = [i for i in range(n) if self.matrix[i][j]]
            if len(nz) != 1:
                return None
            perm[j + 1] = nz[0] + 1
            scales.append(self.matrix[nz[0]][j])
        if len(set(perm.values())) != n:
            return None
        return perm, scales

    def to_endomorphism(self) -> "Endomorphism":
        n = self.ring.n
        return Endomorphism(self.ring, [MagnusElement.from_linear(self.ring, [self.matrix[i][j] for i in range(n)])
                                        for j in range(n)])


# endomorphisms ----------------------------------------------------------------


class Endomorphism:
    """The endomorphism x_i -> images[i-1]."""

    def __init__(self, ring: Ring, images: Sequence[MagnusElement]):
        if len(images) != ring.n:
            raise DimensionError(f"endomorphism of M_{ring.n} needs {ring.n} images")
        for f in images:
            if f.ring != ring:
                raise DimensionError("image over the wrong ring")
        self.ring = ring
        self.images = tuple(images)

    @classmethod
    def identity(cls, ring: Ring) -> "Endomorphism":
        return cls(ring, [MagnusElement.generator(ring, i) for i in range(1, ring.n + 1)])

    def __eq__(self, other):
        if not isinstance(other, Endomorphism):
            return NotImplemented
        return self.ring == other.ring and self.images == other.images

    def __hash__(self):
        return hash((self.ring, self.images))

    def __repr__(self):
        return f"Endomorphism({'; '.join(self.lines())})"

    def __str__(self):
        return "\n".join(self.lines())

    def lines(self) -> list[str]:
        return [f"x{i} -> {f}" for i, f in enumerate(self.images, 1)]

    def __matmul__(self, other: "Endomorphism") -> "Endomorphism":
        return compose(self, other)

    def __call__(self, g: MagnusElement) -> MagnusElement:
        return apply(self, g)

    def is_identity(self) -> bool:
        return self == Endomorphism.identity(self.ring)

    @cached_property
    def linear_images(self) -> tuple[Poly, ...]:
        """Images of y_1..y_n under the induced endomorphism of U."""
        return tuple(f.linear_poly() for f in self.images)

    @cached_property
    def has_identity_linear_part(self) -> bool:
        return self.linear_images == self.ring.gens()

    @cached_property
    def _brackets(self) -> dict:
        return {}

    def image_bracket(self, i: int, j: int) -> MagnusElement:
        key = (i, j)
        cache = self._brackets
        if key not in cache:
            cache[key] = bracket(self.images[i - 1], self.images[j - 1])
        return cache[key]

    def subst(self, a: Poly) -> Poly:
        """a^phi: the induced action on U."""
        if self.has_identity_linear_part:
            return a
        return a.substitute(self.linear_images)

    def linear_map(self) -> LinearMap:
        n = self.ring.n
        return LinearMap(self.ring, [[self.images[j].linear[i] for j in range(n)] for i in range(n)])

    def nonlinear_parts(self) -> tuple[MagnusElement, ...]:
        return tuple(f.commutator_part() for f in self.images)

    def jacobian(self) -> PolyMatrix:
        return jacobian(self)


def apply(phi: Endomorphism, g: MagnusElement) -> MagnusElement:
    """phi(g) = sum lambda_i f_i + sum_{i<j} [f_i, f_j] * a_ij^phi."""
    if phi.ring != g.ring:
        raise DimensionError("ring mismatch in apply")
    ring = phi.ring
    result = MagnusElement.zero(ring)
    for i, lam in enumerate(g.linear):
        if lam:
            result = result + phi.images[i] * lam
    for (i, j), a in commutator_pairs(g).items():
        result = result + module_scale(phi.image_bracket(i, j), phi.subst(a))
    return result


def compose(phi: Endomorphism, psi: Endomorphism) -> Endomorphism:
    """phi*psi: x_i -> g_i(f_1, ..., f_n)."""
    if phi.ring != psi.ring:
        raise DimensionError("ring mismatch in compose")
    return Endomorphism(phi.ring, [apply(phi, g) for g in psi.images])


def compose_all(ring: Ring, maps: Sequence[Endomorphism]) -> Endomorphism:
    result = Endomorphism.identity(ring)
    for m in maps:
        result = compose(result, m)
    return result


def jacobian(phi: Endomorphism) -> PolyMatrix:
    """Entry (i, j) is the Fox derivative of f_j with respect to x_i."""
    return PolyMatrix.from_columns(phi.ring, [fox_derivatives(f).entries for f in phi.images])


def jacobian_det(phi: Endomorphism) -> Poly:
    return jacobian(phi).det()


def is_automorphism(phi: Endomorphism) -> bool:
    """Invertible Jacobian, i.e. its determinant is a nonzero constant."""
    d = jacobian_det(phi)
    return bool(d) and d.is_constant()


def invert(phi: Endomorphism) -> Endomorphism:
    """Exact inverse, certified by composing on both sides.

    The linear part L is factored off first, phi = L*phi' with phi' = (x_i + m_i).
    Then J(phi')^-1 = I + B is computed as adjugate / determinant, every column
    of B is lifted back to M_n', and psi' = (x_i + g_i) inverts phi'.
    """
    ring = phi.ring
    lin = phi.linear_map()
    if not lin.is_invertible():
        raise NotAnAutomorphismError("linear part is singular")
    lin_inv = lin.inverse()
    lin_inv_endo = lin_inv.to_endomorphism()
    reduced = compose(lin_inv_endo, phi)
    if not reduced.has_identity_linear_part:
        raise CertificationError("linear normalisation failed")
    if all(f == MagnusElement.generator(ring, i) for i, f in enumerate(reduced.images, 1)):
        reduced_inv = reduced
    else:
        jac = jacobian(reduced)
        jac_inv = series_inverse(jac)
        if jac_inv is None:
            raise NotAnAutomorphismError(f"Jacobian determinant {jac.det()} is not a unit")
        b = jac_inv - PolyMatrix.identity(ring)
        images = []
        for j in range(ring.n):
            g = lift_column(b.column(j))
            images.append(MagnusElement.generator(ring, j + 1) + g)
        reduced_inv = Endomorphism(ring, images)
    result = compose(reduced_inv, lin_inv_endo)
    ident = Endomorphism.identity(ring)
    if compose(phi, result) != ident or compose(result, phi) != ident:
        raise CertificationError("inverse failed to recompose to the identity")
    return result


def conjugate(phi: Endomorphism, psi: Endomorphism, psi_inv: Endomorphism | None = None) -> Endomorphism:
    """phi^psi = psi*phi*psi^-1."""
    if psi_inv is None:
        psi_inv = invert(psi)
    return compose(compose(psi, phi), psi_inv)


def commutator(phi: Endomorphism, psi: Endomorphism) -> Endomorphism:
    """[phi, psi] = phi*psi*phi^-1*psi^-1."""
    return compose(compose(compose(phi, psi), invert(phi)), invert(psi))


# one-row maps -----------------------------------------------------------------


def is_one_row(phi: Endomorphism) -> int | None:
    """Row index of the single moved generator (1 for the identity), else None."""
    ring = phi.ring
    moved = [i for i, f in enumerate(phi.images, 1) if f != MagnusElement.generator(ring, i)]
    if not moved:
        return 1
    if len(moved) == 1:
        return moved[0]
    return None


def is_chein_valid(i: int, f: MagnusElement) -> bool:
    """Whether (x_1, ..., x_i + f, ..., x_n) is an automorphism.

    Its Jacobian differs from I only in column i, so the determinant is
    1 + df/dx_i; this is a unit iff df/dx_i is a constant other than -1.
    For f in M_n' that means df/dx_i = 0, i.e. f lies in the ideal generated
    by the [x_s, x_t] with s, t != i.
    """
    f.ring.check_index(i)
    d = f.module[i - 1]
    return d.is_constant() and f.ring.field.norm(1 + d.constant_term()) != 0


def is_free_of(f: MagnusElement, i: int) -> bool:
    """Whether f lies in the subalgebra generated by the x_k with k != i."""
    if f.linear[i - 1]:
        return False
    if f.module[i - 1] != f.ring.const(f.linear[i - 1]):
        return False
    return all(i not in d.variables() for d in f.module)


def endo_degrees(phi: Endomorphism):
    """(ldeg, deg) over the nonlinear parts of the images."""
    lo, hi = POS_INF, NEG_INF
    for m in phi.nonlinear_parts():
        a, b = element_degrees(m)
        lo = min(lo, a)
        hi = max(hi, b)
    return lo, hi


# builders ---------------------------------------------------------------------


def _gen(ring, i):
    return MagnusElement.generator(ring, i)


def _certified(phi: Endomorphism, name: str) -> Endomorphism:
    if not is_automorphism(phi):
        raise NotAnAutomorphismError(f"{name} is not an automorphism")
    return phi


def one_row(ring: Ring, i: int, f: MagnusElement, certify: bool = True) -> Endomorphism:
    """(x_1, ..., x_i + f, ..., x_n)."""
    ring.check_index(i)
    if certify and not is_chein_valid(i, f):
        raise NotAnAutomorphismError(f"row {i}: df/dx{i} = {f.module[i - 1]} is not admissible")
    images = list(Endomorphism.identity(ring).images)
    images[i - 1] = images[i - 1] + f
    return Endomorphism(ring, images)


def elementary(ring: Ring, i: int, alpha, f: MagnusElement | None = None) -> Endomorphism:
    """(x_1, ..., alpha*x_i + f, ..., x_n) with alpha != 0 and f free of x_i."""
    ring.check_index(i)
    alpha = ring.field(alpha)
    if not alpha:
        raise DomainError("elementary automorphism needs a nonzero scalar")
    if f is None:
        f = MagnusElement.zero(ring)
    if not is_free_of(f, i):
        raise DomainError(f"elementary map at row {i}: f must not contain x{i}")
    images = list(Endomorphism.identity(ring).images)
    images[i - 1] = _gen(ring, i) * alpha + f
    return Endomorphism(ring, images)


def linear(lmap: LinearMap) -> Endomorphism:
    if not lmap.is_invertible():
        raise NotAnAutomorphismError("singular matrix")
    return lmap.to_endomorphism()


def transposition(ring: Ring, s: int, t: int) -> Endomorphism:
    """(st): swaps x_s and x_t."""
    return LinearMap.permutation(ring, {s: t, t: s}).to_endomorphism()


def _bracket_poly(ring, i, j, a):
    return MagnusElement.commutator(ring, i, j, a)


def chein_C(ring: Ring, a: Poly) -> Endomorphism:
    """C(a) = (x_1 + [x_2, x_3]*a, x_2, ..., x_n)."""
    if ring.n < 3:
        raise DomainError("C(a) needs n >= 3")
    return one_row(ring, 1, _bracket_poly(ring, 2, 3, a))


def d_map(ring: Ring, a: Poly, certify: bool = True) -> Endomorphism:
    """D(a) = (x_1 + [x_1,x_2]*y_1*a, x_2 + [x_1,x_2]*y_2*a, x_3, ..., x_n)."""
    images = list(Endomorphism.identity(ring).images)
    images[0] = images[0] + _bracket_poly(ring, 1, 2, ring.var(1) * a)
    images[1] = images[1] + _bracket_poly(ring, 1, 2, ring.var(2) * a)
    phi = Endomorphism(ring, images)
    return _certified(phi, "D(a)") if certify else phi


def exponential_E(m: MagnusElement, certify: bool = True) -> Endomorphism:
    """E(m) = exp(ad m) = (x_1 + [m, x_1], ..., x_n + [m, x_n]) for m in M_n'."""
    if not m.is_commutator():
        raise DomainError("exponential automorphism needs m in [M_n, M_n]")
    ring = m.ring
    images = [_gen(ring, i) + module_scale(m, ring.var(i)) for i in range(1, ring.n + 1)]
    phi = Endomorphism(ring, images)
    return _certified(phi, "E(m)") if certify else phi


def a_map(ring: Ring, h: Poly, g: Poly, certify: bool = True) -> Endomorphism:
    """A(h,g) = (x_1 + [x_1,x_n]hg + [x_2,x_n]hg^2, x_2 - [x_1,x_n]h - [x_2,x_n]hg, x_3, ..., x_n)."""
    n = ring.n
    images = list(Endomorphism.identity(ring).images)
    hg = h * g
    images[0] = images[0] + _bracket_poly(ring, 1, n, hg) + _bracket_poly(ring, 2, n, hg * g)
    images[1] = images[1] - _bracket_poly(ring, 1, n, h) - _bracket_poly(ring, 2, n, hg)
    phi = Endomorphism(ring, images)
    return _certified(phi, "A(h,g)") if certify else phi


def b_map(ring: Ring, h: Poly, f: Poly, g: Poly, certify: bool = True) -> Endomorphism:
    """B(h,f,g) = (x_1 + [x_1,x_n]hfg + [x_2,x_n]hg^2, x_2 - [x_1,x_n]hf^2 - [x_2,x_n]hfg, x_3, ..., x_n)."""
    n = ring.n
    images = list(Endomorphism.identity(ring).images)
    hfg = h * f * g
    images[0] = images[0] + _bracket_poly(ring, 1, n, hfg) + _bracket_poly(ring, 2, n, h * g * g)
    images[1] = images[1] - _bracket_poly(ring, 1, n, h * f * f) - _bracket_poly(ring, 2, n, hfg)
    phi = Endomorphism(ring, images)
    return _certified(phi, "B(h,f,g)") if certify else phi


def quadratic(ring: Ring) -> Endomorphism:
    """(x_1 + [x_2, x_3], x_2, ..., x_n)."""
    return chein_C(ring, ring.one)


def cubic(ring: Ring) -> Endomorphism:
    """(x_1 + [[x_2, x_3], x_1], x_2, ..., x_n)."""
    return chein_C(ring, ring.var(1))


def all_permutations(ring: Ring, indices: Sequence[int]):
    """Every permutation of ``indices`` as a dict suitable for LinearMap.permutation."""
    for image in permutations(indices):
        yield dict(zip(indices, image))

