"""Text syntax for polynomials, Lie elements and endomorphisms.

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' INT)?
    atom    := NUMBER | 'x' INT | 'y' INT | '[' expr ',' expr ']' | '(' expr ')'
    endo    := stmt ((';' | NEWLINE) stmt)*
    stmt    := 'x' INT '->' expr

Products of a commutator-valued element with a polynomial act through the
module structure, so ``[x2,x3]*y1^2*y4`` is the bracket scaled by y1^2*y4.
Generators left out of an endomorphism are fixed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .endo import Endomorphism
from .errors import DomainError, ParseError
from .fieldpoly import Poly, Ring
from .magnus import Bracket, Gen, LieExpr, MagnusElement, PolyMul, Scale, Sum, bracket, module_scale

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<gen>[xy]\d+)
  | (?P<arrow>->)
  | (?P<op>[-+*/^\[\](),;])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


# syntax tree ------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    op: str  # num, x, y, br, add, sub, neg, mul, div, pow
    args: tuple
    pos: int


class _Parser:
    def __init__(self, text: str, newlines: bool = False):
        self.text = text
        self.toks = [t for t in tokenize(text) if newlines or t.kind != "nl"]
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        where = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"{msg} at {where}", self.text, tok.pos)

    def take(self, text=None, kind=None) -> Token:
        tok = self.tok
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            self.error(f"expected {text or kind}")
        self.i += 1
        return tok

    def accept(self, text) -> Token | None:
        if self.tok.text == text:
            return self.take(text)
        return None

    def expr(self) -> Node:
        node = self.term()
        while self.tok.text in ("+", "-"):
            tok = self.take()
            node = Node("add" if tok.text == "+" else "sub", (node, self.term()), tok.pos)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.text in ("*", "/"):
            tok = self.take()
            node = Node("mul" if tok.text == "*" else "div", (node, self.unary()), tok.pos)
        return node

    def unary(self) -> Node:
        if self.tok.text == "-":
            tok = self.take()
            return Node("neg", (self.unary(),), tok.pos)
        if self.tok.text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        if self.tok.text == "^":
            tok = self.take()
            exp = self.take(kind="num")
            node = Node("pow", (node, int(exp.text)), tok.pos)
        return node

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "num":
            self.take()
            return Node("num", (int(tok.text),), tok.pos)
        if tok.kind == "gen":
            self.take()
            return Node(tok.text[0], (int(tok.text[1:]),), tok.pos)
        if tok.text == "[":
            self.take()
            left = self.expr()
            self.take(",")
            right = self.expr()
            self.take("]")
            return Node("br", (left, right), tok.pos)
        if tok.text == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        self.error("expected an operand")

    def finish(self):
        if self.tok.kind != "end":
            self.error("unexpected trailing input")


def parse_tree(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    p.finish()
    return node


# evaluation -------------------------------------------------------------------


class _Evaluator:
    """Evaluates a tree to a scalar, Poly or MagnusElement over ``ring``."""

    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.text = text

    def fail(self, msg, node: Node):
        raise ParseError(msg, self.text, node.pos)

    def index(self, node: Node) -> int:
        k = node.args[0]
        if not 1 <= k <= self.ring.n:
            self.fail(f"index {node.op}{k} out of range for n = {self.ring.n}", node)
        return k

    def to_elem(self, v, node) -> MagnusElement:
        if isinstance(v, MagnusElement):
            return v
        p = self.to_poly(v)
        if p:
            self.fail("a polynomial in y cannot be added to a Lie element", node)
        return MagnusElement.zero(self.ring)

    def to_poly(self, v) -> Poly:
        if isinstance(v, Poly):
            return v
        return self.ring.const(v)

    def eval(self, node: Node):
        op = node.op
        ring = self.ring
        F = ring.field
        if op == "num":
            return F(node.args[0])
        if op == "x":
            return MagnusElement.generator(ring, self.index(node))
        if op == "y":
            return ring.var(self.index(node))
        if op == "br":
            left = self.to_elem(self.eval(node.args[0]), node.args[0])
            right = self.to_elem(self.eval(node.args[1]), node.args[1])
            return bracket(left, right)
        if op == "neg":
            v = self.eval(node.args[0])
            return F.norm(-v) if _is_scalar(v) else -v
        if op == "pow":
            v = self.eval(node.args[0])
            if isinstance(v, MagnusElement):
                self.fail("powers of Lie elements are not defined", node)
            return self.to_poly(v) ** node.args[1] if isinstance(v, Poly) else F.norm(v ** node.args[1])
        a, b = (self.eval(x) for x in node.args)
        if op in ("add", "sub"):
            if _is_scalar(a) and _is_scalar(b):
                return F.norm(a + b if op == "add" else a - b)
            if isinstance(a, MagnusElement) or isinstance(b, MagnusElement):
                a, b = self.to_elem(a, node.args[0]), self.to_elem(b, node.args[1])
            else:
                a, b = self.to_poly(a), self.to_poly(b)
            return a + b if op == "add" else a - b
        if op == "div":
            if not _is_scalar(b):
                b = self.to_poly(b)
                if not b.is_constant():
                    self.fail("division only by nonzero scalars", node)
                b = b.constant_term()
            if not b:
                self.fail("division by zero", node)
            b = F.inv(b)
            return F.norm(a * b) if _is_scalar(a) else a * b
        # mul
        if _is_scalar(a) and _is_scalar(b):
            return F.norm(a * b)
        if isinstance(a, MagnusElement) and isinstance(b, MagnusElement):
            self.fail("product of two Lie elements; use [a,b] for the bracket", node)
        if isinstance(b, MagnusElement):
            a, b = b, a
        if isinstance(a, MagnusElement):
            p = self.to_poly(b)
            try:
                return module_scale(a, p)
            except DomainError as exc:
                self.fail(str(exc), node)
        return self.to_poly(a) * self.to_poly(b)


def _is_scalar(v) -> bool:
    return isinstance(v, (int, Fraction))


def parse_expression(text: str, ring: Ring):
    """Parse and evaluate: returns a scalar, a Poly or a MagnusElement."""
    return _Evaluator(ring, text).eval(parse_tree(text))


def parse_poly(text: str, ring: Ring) -> Poly:
    node = parse_tree(text)
    v = _Evaluator(ring, text).eval(node)
    if isinstance(v, MagnusElement):
        raise ParseError("expected a polynomial in y1..yn, got a Lie element", text, node.pos)
    return v if isinstance(v, Poly) else ring.const(v)


def parse_element(text: str, ring: Ring) -> MagnusElement:
    node = parse_tree(text)
    ev = _Evaluator(ring, text)
    return ev.to_elem(ev.eval(node), node)


def parse_lie_expr(text: str) -> LieExpr:
    """Ring-independent expression tree; polynomial factors stay symbolic."""
    return _to_lie(parse_tree(text), text)


def _to_lie(node: Node, text: str) -> LieExpr:
    op = node.op
    if op == "x":
        return Gen(node.args[0])
    if op == "br":
        return Bracket(_to_lie(node.args[0], text), _to_lie(node.args[1], text))
    if op in ("add", "sub"):
        right = _to_lie(node.args[1], text)
        return Sum((_to_lie(node.args[0], text), right if op == "add" else Scale(-1, right)))
    if op == "neg":
        return Scale(-1, _to_lie(node.args[0], text))
    if op in ("mul", "div"):
        left, right = node.args
        if op == "mul" and _has_gen(right) and not _has_gen(left):
            left, right = right, left
        if _has_gen(right):
            raise ParseError("product of two Lie elements", text, node.pos)
        src = text
        factor = right if op == "mul" else Node("div", (Node("num", (1,), node.pos), right), node.pos)

        def poly(ring, factor=factor, src=src):
            v = _Evaluator(ring, src).eval(factor)
            return v if isinstance(v, Poly) else ring.const(v)

        return PolyMul(_to_lie(left, text), poly)
    raise ParseError("expected a Lie element", text, node.pos)


def _has_gen(node: Node) -> bool:
    if node.op == "x":
        return True
    return any(isinstance(a, Node) and _has_gen(a) for a in node.args)


def parse_endomorphism(text: str, ring: Ring) -> Endomorphism:
    p = _Parser(text, newlines=True)
    images: dict[int, MagnusElement] = {}
    while True:
        while p.tok.kind == "nl" or p.tok.text == ";":
            p.take()
        if p.tok.kind == "end":
            break
        tok = p.take(kind="gen")
        if tok.text[0] != "x":
            p.error("expected a generator x<k>", tok)
        k = int(tok.text[1:])
        if not 1 <= k <= ring.n:
            raise ParseError(f"index x{k} out of range for n = {ring.n}", text, tok.pos)
        if k in images:
            raise ParseError(f"x{k} assigned twice", text, tok.pos)
        p.take("->")
        start = p.i
        # an image runs to the next separator
        depth = 0
        while not (p.tok.kind in ("end", "nl") or (p.tok.text == ";" and depth == 0)):
            depth += {"[": 1, "(": 1, "]": -1, ")": -1}.get(p.tok.text, 0)
            p.i += 1
        if p.i == start:
            p.error("expected an image expression")
        sub = _Parser.__new__(_Parser)
        sub.text, sub.toks, sub.i = text, p.toks[start:p.i] + [Token("end", "", p.tok.pos)], 0
        node = sub.expr()
        sub.finish()
        ev = _Evaluator(ring, text)
        images[k] = ev.to_elem(ev.eval(node), node)
    if not images:
        raise ParseError("empty endomorphism", text, 0)
    return Endomorphism(ring, [images.get(k, MagnusElement.generator(ring, k)) for k in range(1, ring.n + 1)])


def format_element(f: MagnusElement) -> str:
    return str(f)


def format_endomorphism(phi: Endomorphism) -> str:
    return "; ".join(phi.lines())

