"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (bad input, failed hypotheses,
cubic obstructions), 2 when an exact certification fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import checks
from .decomp import (TAME, decompose_B, decompose_chein_monomial, decompose_D,
                     decompose_exponential, decompose_one_row, format_letter, reduce_A, verify_word)
from .endo import (a_map, b_map, compose, d_map, endo_degrees, exponential_E, invert,
                   is_automorphism, is_chein_valid, is_one_row, jacobian, jacobian_det, one_row)
from .errors import CertificationError, CubicObstructionError, MetabelianError, ParseError
from .fieldpoly import Field, Poly, Ring, format_poly
from .magnus import MagnusElement, commutator_pairs, element_degrees, fox_derivatives, lift_column, to_basis
from .parse import parse_element, parse_endomorphism, parse_expression, parse_poly
from .serial import dumps, element_to_json, endo_to_json, poly_to_json, validate, word_from_json, word_to_json

FAMILIES = ("chein", "one-row", "d", "exp", "a", "b")


class UsageError(MetabelianError):
    pass


def read_source(arg: str) -> str:
    """``-`` reads stdin, ``@path`` reads a file, anything else is literal text."""
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        return Path(arg[1:]).read_text()
    return arg


# commands ---------------------------------------------------------------------


def cmd_normal_form(ring, args):
    v = parse_expression(read_source(args.expr), ring)
    if isinstance(v, MagnusElement):
        return str(to_basis(v)), element_to_json(v)
    p = v if isinstance(v, Poly) else ring.const(v)
    return format_poly(p), poly_to_json(p)


def cmd_fox(ring, args):
    f = parse_element(read_source(args.expr), ring)
    col = fox_derivatives(f)
    lines = [f"d/dx{i} = {format_poly(c)}" for i, c in enumerate(col, 1)]
    return "\n".join(lines), {"column": [poly_to_json(c) for c in col], "y_contract_zero": not col.y_contract()}


def cmd_lift(ring, args):
    text = read_source(args.column)
    parts = [p for p in text.replace("\n", ";").split(";") if p.strip()]
    if len(parts) != ring.n:
        raise UsageError(f"lift needs {ring.n} polynomials separated by ';', got {len(parts)}")
    col = [parse_poly(p, ring) for p in parts]
    f = lift_column(col)
    return str(to_basis(f)), element_to_json(f)


def cmd_jacobian(ring, args):
    phi = parse_endomorphism(read_source(args.endo), ring)
    jac = jacobian(phi)
    lines = ["[" + ", ".join(format_poly(e) for e in row) + "]" for row in jac.rows]
    det = jacobian_det(phi)
    lines.append(f"det = {format_poly(det)}")
    return "\n".join(lines), {"matrix": [[poly_to_json(e) for e in row] for row in jac.rows],
                              "det": poly_to_json(det)}


def cmd_is_aut(ring, args):
    phi = parse_endomorphism(read_source(args.endo), ring)
    ok = is_automorphism(phi)
    return str(ok).lower(), {"automorphism": ok, "det": poly_to_json(jacobian_det(phi))}


def cmd_invert(ring, args):
    phi = parse_endomorphism(read_source(args.endo), ring)
    psi = invert(phi)
    return "\n".join(psi.lines()), endo_to_json(psi)


def cmd_compose(ring, args):
    phi = parse_endomorphism(read_source(args.phi), ring)
    psi = parse_endomorphism(read_source(args.psi), ring)
    out = compose(phi, psi)
    return "\n".join(out.lines()), endo_to_json(out)


def cmd_is_chein(ring, args):
    phi = parse_endomorphism(read_source(args.endo), ring)
    row = is_one_row(phi)
    valid = row is not None and is_chein_valid(row, phi.images[row - 1] - MagnusElement.generator(ring, row))
    text = f"one-row at x{row}, {'valid' if valid else 'invalid'}" if row else "not a one-row map"
    return text, {"row": row, "valid": valid}


def _deg_json(pair):
    return [d if isinstance(d, int) else ("inf" if d > 0 else "-inf") for d in pair]


def cmd_ldeg(ring, args):
    text = read_source(args.expr)
    if "->" in text:
        pair = endo_degrees(parse_endomorphism(text, ring))
    else:
        v = parse_expression(text, ring)
        pair = element_degrees(v) if isinstance(v, MagnusElement) else (
            v if isinstance(v, Poly) else ring.const(v)).degrees()
    ld, dg = _deg_json(pair)
    return f"ldeg = {ld}, deg = {dg}", {"ldeg": ld, "deg": dg}


def _split_polys(text: str, ring: Ring, count: int) -> list[Poly]:
    parts = [p for p in text.split(";")]
    if len(parts) != count:
        raise UsageError(f"expected {count} polynomials separated by ';', got {len(parts)}")
    return [parse_poly(p, ring) for p in parts]


def _chein_target(ring, text, row):
    """A polynomial a means C(a); an element f means the one-row map at ``row``; '->' means a map."""
    if "->" in text:
        phi = parse_endomorphism(text, ring)
        r = is_one_row(phi)
        if r is None:
            raise UsageError("not a one-row map")
        return r, phi.images[r - 1] - MagnusElement.generator(ring, r)
    v = parse_expression(text, ring)
    if isinstance(v, MagnusElement):
        return row, v
    a = v if isinstance(v, Poly) else ring.const(v)
    return 1, MagnusElement.commutator(ring, 2, 3, a)


def cmd_decompose(ring, args):
    text = read_source(args.input)
    mode = args.mode.replace("-", "_")
    fam = args.family
    if fam in ("chein", "one-row"):
        row, f = _chein_target(ring, text, args.row)
        target = one_row(ring, row, f, certify=False)
        pairs = commutator_pairs(f) if f.is_commutator() else {}
        a = pairs.get((2, 3)) if row == 1 and len(pairs) == 1 else None
        if fam == "chein" and mode == TAME and a is not None and len(a) == 1 and a.ldeg >= 2:
            (exps, c), = a.terms.items()
            w = decompose_chein_monomial(ring, c, exps)
        else:
            w = decompose_one_row(ring, row, f, mode)
    elif fam == "d":
        a = parse_poly(text, ring)
        w, target = decompose_D(ring, a, mode), d_map(ring, a, certify=False)
    elif fam == "exp":
        m = parse_element(text, ring)
        w, target = decompose_exponential(m, mode), exponential_E(m, certify=False)
    elif fam == "a":
        h, g = _split_polys(text, ring, 2)
        w, target = reduce_A(ring, h, g), a_map(ring, h, g, certify=False)
    else:
        h, f, g = _split_polys(text, ring, 3)
        w, target = decompose_B(ring, h, f, g), b_map(ring, h, f, g, certify=False)
    certified = verify_word(w, target)
    if not certified:
        raise CertificationError("decomposition does not recompose to the target")
    lines = [f"word ({w.alphabet}, {len(w)} letters, depth {w.depth}):"]
    lines += [f"  {format_letter(l)}" for l in w.letters] or ["  id"]
    lines.append("certified: true")
    return "\n".join(lines), {"word": word_to_json(w, target), "length": len(w), "depth": w.depth,
                              "alphabet": w.alphabet, "certified": certified}


def cmd_verify_word(ring, args):
    doc = json.loads(read_source(args.word))
    if "result" in doc and "letters" not in doc:
        doc = doc["result"]
    if "word" in doc and "letters" not in doc:
        doc = doc["word"]
    w, target = word_from_json(doc)
    if args.target:
        target = parse_endomorphism(read_source(args.target), w.ring)
    if target is None:
        raise UsageError("no target: pass --target or embed one in the word file")
    ok = verify_word(w, target)
    if not ok:
        raise CertificationError("word does not evaluate to the target")
    return "certified: true", {"certified": True, "length": len(w)}


def cmd_selftest(ring, args):
    only = set(args.only) if args.only else None
    results = checks.run_all(args.seed or 0, only, report=None if args.json else args.progress)
    ok = all(r.passed for r in results)
    lines = [r.line() for r in results]
    payload = {"passed": ok, "criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                                           "checks": r.checked, "failures": r.failures} for r in results]}
    if not ok:
        raise _SelftestFailure("\n".join(lines) if args.json else "selftest: FAILED", payload)
    return ("\n".join(lines) if args.json else "selftest: all criteria passed"), payload


class _SelftestFailure(CertificationError):
    def __init__(self, text, payload):
        super().__init__("selftest failed")
        self.text = text
        self.payload = payload


COMMANDS = {
    "normal-form": cmd_normal_form, "fox": cmd_fox, "lift": cmd_lift, "jacobian": cmd_jacobian,
    "is-aut": cmd_is_aut, "invert": cmd_invert, "compose": cmd_compose, "is-chein": cmd_is_chein,
    "ldeg": cmd_ldeg, "decompose": cmd_decompose, "verify-word": cmd_verify_word, "selftest": cmd_selftest,
}


# argument parsing ----------------------------------------------------------------


def _session_options(p: argparse.ArgumentParser, top: bool):
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--n", type=int, default=d(4), help="number of generators (2..16, default 4)")
    p.add_argument("--field", default=d("q"), help="q (rationals) or gf:<p> (default q)")
    p.add_argument("--json", action="store_true", default=d(False), help="emit a JSON envelope")
    p.add_argument("--seed", type=int, default=d(None), help="seed for randomised commands")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metabelian", description="Exact computations in free metabelian "
                                     "Lie algebras and certified decomposition of their automorphisms.")
    _session_options(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *positional):
        p = sub.add_parser(name, help=help_text)
        _session_options(p, False)
        for arg, h in positional:
            p.add_argument(arg, help=h + " (literal text, '-' for stdin, '@file')")
        return p

    add("normal-form", "print an element in the right-normed basis", ("expr", "Lie element or polynomial"))
    add("fox", "Fox derivatives of an element", ("expr", "Lie element"))
    add("lift", "element with the given Fox column", ("column", "n polynomials separated by ';'"))
    add("jacobian", "Jacobian matrix and determinant", ("endo", "endomorphism 'x1 -> ...; x2 -> ...'"))
    add("is-aut", "decide whether an endomorphism is an automorphism", ("endo", "endomorphism"))
    add("invert", "exact inverse of an automorphism", ("endo", "automorphism"))
    add("compose", "the composition phi*psi", ("phi", "endomorphism"), ("psi", "endomorphism"))
    add("is-chein", "recognise a one-row (Chein) automorphism", ("endo", "endomorphism"))
    add("ldeg", "lower and upper degree", ("expr", "element, polynomial or endomorphism"))
    p = add("decompose", "certified generator word for a named automorphism",
            ("input", "chein/one-row: polynomial a, element f or one-row map; d: a; exp: m; "
                      "a: 'h; g'; b: 'h; f; g'"))
    p.add_argument("--family", choices=FAMILIES, default="chein")
    p.add_argument("--mode", choices=("tame", "almost-tame", "almost_tame"), default="tame")
    p.add_argument("--row", type=int, default=1, help="row of a one-row map given as an element")
    p = add("verify-word", "check a word file against a target", ("word", "word JSON"))
    p.add_argument("--target", help="target automorphism (default: the target embedded in the file)")
    p = add("selftest", "run the exact self-test criteria 1-10")
    p.add_argument("--only", type=int, nargs="*", help="run only these criteria")
    return parser


def _error_payload(exc: Exception) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        err["line"], err["column"] = exc.line, exc.column
    if isinstance(exc, CubicObstructionError):
        err["residues"] = [[r[0], r[1], r[2], str(r[3])] for r in exc.residues]
    return err


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    args.progress = lambda line: print(line, file=out, flush=True)
    envelope = {"command": args.command}
    code = 0
    text = ""
    try:
        field = Field.parse(args.field)
        if not 2 <= args.n <= 16:
            raise UsageError("--n must lie in 2..16")
        ring = Ring(args.n, field)
        envelope.update(n=args.n, field=field.spec())
        text, result = COMMANDS[args.command](ring, args)
        envelope.update(status="ok", exit_code=0, result=result)
    except _SelftestFailure as exc:
        code, text = 2, exc.text
        envelope.update(status="error", exit_code=2, result=exc.payload, error=_error_payload(exc))
    except CertificationError as exc:
        code = 2
        envelope.update(status="error", exit_code=2, error=_error_payload(exc))
    except (MetabelianError, ValueError, OSError) as exc:
        code = 1
        envelope.update(status="error", exit_code=1, error=_error_payload(exc))
    if args.json:
        validate(envelope)
        print(dumps(envelope), file=out)
    elif code == 0 or text:
        print(text, file=out)
    if code and not args.json:
        e = envelope["error"]
        print(f"error: {e['type']}: {e['message']}", file=err)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
