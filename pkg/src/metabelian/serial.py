"""JSON encoding of elements, endomorphisms and generator words."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema

from .decomp import (ALMOST_TAME, Chein, CubicResidue, Elementary, GeneratorWord, Letter, Linear)
from .endo import Endomorphism, LinearMap
from .errors import DomainError
from .fieldpoly import Field, Poly, Ring, format_poly
from .magnus import BasisCombination, MagnusElement, to_basis

WORD_FORMAT = "metabelian-word/1"


def scalar_to_json(c) -> str:
    return str(c)


def scalar_from_json(s: str, field: Field):
    try:
        return field(Fraction(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad scalar {s!r}") from exc


def poly_to_json(p: Poly) -> dict:
    return {"text": format_poly(p),
            "terms": [{"coef": scalar_to_json(c), "exponents": list(e)} for e, c in p.terms.items()]}


def poly_from_json(d: dict, ring: Ring) -> Poly:
    out = ring.zero
    for t in d["terms"]:
        if len(t["exponents"]) != ring.n:
            raise DomainError("exponent vector of the wrong length")
        out = out + ring.monomial(tuple(t["exponents"]), scalar_from_json(t["coef"], ring.field))
    return out


def element_to_json(f: MagnusElement) -> dict:
    bc = to_basis(f)
    return {"text": str(bc),
            "linear": [scalar_to_json(c) for c in bc.linear],
            "terms": [{"coef": scalar_to_json(c), "head": h, "tail": list(t)} for c, h, t in bc.terms]}


def element_from_json(d: dict, ring: Ring) -> MagnusElement:
    F = ring.field
    if len(d["linear"]) != ring.n:
        raise DomainError("linear part of the wrong length")
    linear = tuple(scalar_from_json(c, F) for c in d["linear"])
    terms = tuple((scalar_from_json(t["coef"], F), int(t["head"]), tuple(int(k) for k in t["tail"]))
                  for t in d["terms"])
    for _, h, tail in terms:
        for k in (h, *tail):
            ring.check_index(k)
    return BasisCombination(ring, linear, terms).evaluate()


def endo_to_json(phi: Endomorphism) -> dict:
    ring = phi.ring
    return {"n": ring.n, "field": ring.field.spec(), "images": [element_to_json(f) for f in phi.images]}


def endo_from_json(d: dict, ring: Ring | None = None) -> Endomorphism:
    ring = ring or Ring(int(d["n"]), Field.parse(d["field"]))
    return Endomorphism(ring, [element_from_json(f, ring) for f in d["images"]])


def letter_to_json(letter: Letter) -> dict:
    d = {"kind": letter.kind}
    if isinstance(letter, Elementary):
        d.update(row=letter.row, alpha=scalar_to_json(letter.alpha), f=element_to_json(letter.f))
    elif isinstance(letter, Chein):
        d.update(row=letter.row, f=element_to_json(letter.f))
    elif isinstance(letter, CubicResidue):
        d.update(row=letter.row, s=letter.s, t=letter.t, alpha=scalar_to_json(letter.alpha))
    elif isinstance(letter, Linear):
        d.update(matrix=[[scalar_to_json(c) for c in row] for row in letter.lmap.matrix])
    else:
        raise DomainError(f"cannot serialise {letter!r}")
    d["inverted"] = letter.inverted
    return d


def letter_from_json(d: dict, ring: Ring) -> Letter:
    kind = d["kind"]
    inv = bool(d.get("inverted", False))
    F = ring.field
    if kind == "elementary":
        return Elementary(int(d["row"]), scalar_from_json(d["alpha"], F), element_from_json(d["f"], ring), inv)
    if kind == "chein":
        return Chein(int(d["row"]), element_from_json(d["f"], ring), inv)
    if kind == "cubic_residue":
        return CubicResidue(ring, int(d["row"]), int(d["s"]), int(d["t"]), scalar_from_json(d["alpha"], F), inv)
    if kind == "linear":
        return Linear(LinearMap(ring, [[scalar_from_json(c, F) for c in row] for row in d["matrix"]]), inv)
    raise DomainError(f"unknown letter kind {kind!r}")


def word_to_json(w: GeneratorWord, target: Endomorphism | None = None) -> dict:
    d = {"format": WORD_FORMAT, "n": w.ring.n, "field": w.ring.field.spec(), "alphabet": w.alphabet,
         "depth": w.depth, "letters": [letter_to_json(l) for l in w.letters]}
    if target is not None:
        d["target"] = endo_to_json(target)
    return d


def word_from_json(d: dict) -> tuple[GeneratorWord, Endomorphism | None]:
    validate(d)
    ring = Ring(int(d["n"]), Field.parse(d["field"]))
    letters = tuple(letter_from_json(l, ring) for l in d["letters"])
    w = GeneratorWord(ring, letters, d.get("alphabet", ALMOST_TAME), int(d.get("depth", 0)))
    target = endo_from_json(d["target"], ring) if "target" in d else None
    return w, target


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


@lru_cache(maxsize=None)
def schema() -> dict:
    text = resources.files("metabelian").joinpath("word.schema.json").read_text()
    return json.loads(text)


def validate(doc) -> None:
    """Raise DomainError unless ``doc`` matches the shipped schema."""
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        raise DomainError(f"document does not match the word schema: {exc.message}") from exc
