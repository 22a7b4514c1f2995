import io
import json
import pathlib
import subprocess
import sys

import pytest

from metabelian import cli, serial
from metabelian.decomp import TAME, decompose_one_row
from metabelian.endo import one_row
from metabelian.errors import DomainError
from metabelian.fieldpoly import Ring
from metabelian.magnus import MagnusElement

ROOT = pathlib.Path(__file__).resolve().parents[1]


def run(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        old, sys.stdin = sys.stdin, io.StringIO(stdin)
    try:
        code = cli.run(list(argv), out, err)
    finally:
        if stdin is not None:
            sys.stdin = old
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run("--json", *argv)
    doc = json.loads(out)
    serial.validate(doc)
    assert doc["exit_code"] == code
    return code, doc


def test_is_aut():
    assert run("--n", "4", "is-aut", "x1 -> x1")[:2] == (0, "true\n")
    assert run("--n", "4", "is-aut", "x1 -> x1 + [x2,x1]")[:2] == (0, "false\n")


def test_decompose_chein_monomial():
    code, out, _ = run("--n", "4", "decompose", "--family", "chein", "--mode", "tame", "y1*y2")
    assert code == 0
    assert "4 letters" in out and "certified: true" in out


def test_decompose_cubic_obstruction():
    code, out, err = run("--n", "4", "decompose", "--family", "chein", "--mode", "tame", "[[x2,x3],x1]")
    assert code == 1 and out == ""
    assert "CubicObstructionError" in err
    code, doc = run_json("--n", "4", "decompose", "[[x2,x3],x1]")
    assert code == 1 and doc["status"] == "error"
    assert doc["error"]["residues"]


def test_decompose_other_families():
    for family, mode, text in [("d", "almost-tame", "y1"), ("exp", "tame", "[x1,x2]*y3*y4"),
                               ("a", "tame", "y3; y1"), ("b", "tame", "1; 1; 1"),
                               ("one-row", "almost-tame", "x1 -> x1 + [[x2,x3],x1] + [x3,x4]*y2")]:
        code, doc = run_json("--n", "4", "decompose", "--family", family, "--mode", mode, text)
        assert code == 0 and doc["result"]["certified"], family


def test_parse_errors_exit_one():
    code, _, err = run("--n", "4", "fox", "[x1,x2")
    assert code == 1
    assert "line 1, column 7" in err
    code, doc = run_json("--n", "4", "fox", "[x1,x2")
    assert doc["error"]["type"] == "ParseError" and doc["error"]["column"] == 7


def test_kernel_commands():
    assert run("--n", "4", "normal-form", "[x1,[x2,x3]]")[1] == "[[x3,x1],x2] - [[x2,x1],x3]\n"
    assert run("--n", "4", "fox", "[x1,x2]")[1].splitlines()[:2] == ["d/dx1 = y2", "d/dx2 = -y1"]
    assert run("--n", "4", "lift", "y2; -y1; 0; 0")[1].strip() == "-[x2,x1]"
    assert run("--n", "4", "lift", "y2; 0; 0; 0")[0] == 1
    assert run("--n", "4", "invert", "x1 -> x1 + [x2,x3]")[1].splitlines()[0] == "x1 -> x1 + [x3,x2]"
    assert run("--n", "4", "is-chein", "x1 -> x1 + [[x2,x3],x1]")[1].strip() == "one-row at x1, valid"
    assert run("--n", "4", "ldeg", "x1 -> x1 + [[x2,x3],x1]")[1].strip() == "ldeg = 3, deg = 3"
    assert run("--n", "4", "jacobian", "x1 -> x1 + [x2,x1]")[1].splitlines()[-1] == "det = -y2 + 1"
    code, out, _ = run("--n", "4", "compose", "x1 -> x1 + [x2,x3]", "x1 -> x1 - [x2,x3]")
    assert out.splitlines() == ["x1 -> x1", "x2 -> x2", "x3 -> x3", "x4 -> x4"]


def test_not_an_automorphism_exits_one():
    assert run("--n", "4", "invert", "x1 -> x1 + [x2,x1]")[0] == 1


def test_stdin_and_file_input(tmp_path):
    assert run("--n", "4", "is-aut", "-", stdin="x1 -> x1 + [x2,x3]\n")[:2] == (0, "true\n")
    f = tmp_path / "phi.txt"
    f.write_text("x1 -> x1 + [x2,x1]\n")
    assert run("--n", "4", "is-aut", f"@{f}")[:2] == (0, "false\n")


def test_fields():
    code, out, _ = run("--n", "4", "--field", "gf:2", "normal-form", "3*[x1,x2]")
    assert (code, out) == (0, "[x2,x1]\n")
    assert run("--n", "4", "--field", "gf:4", "normal-form", "x1")[0] == 1


def test_verify_word_round_trip(tmp_path):
    code, doc = run_json("--n", "5", "--field", "gf:3", "decompose", "y1^2*y5")
    assert code == 0
    env = tmp_path / "env.json"
    env.write_text(json.dumps(doc))
    assert run("verify-word", f"@{env}")[:2] == (0, "certified: true\n")
    code, _, err = run("verify-word", f"@{env}", "--target", "x1 -> x1")
    assert code == 2 and "CertificationError" in err


def test_determinism():
    args = ("--n", "5", "--json", "decompose", "--family", "b", "y2; y1; y3")
    assert run(*args) == run(*args)


def test_selftest_subset():
    code, out, _ = run("selftest", "--only", "2", "3")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "metabelian.cli", "--n", "4", "is-aut", "x1 -> x1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "true\n"


def test_word_json_round_trip():
    ring = Ring(4)
    f = MagnusElement.commutator(ring, 2, 3, ring.var(2) + ring.var(4) ** 2)
    w = decompose_one_row(ring, 1, f, TAME)
    target = one_row(ring, 1, f)
    doc = serial.word_to_json(w, target)
    w2, t2 = serial.word_from_json(json.loads(serial.dumps(doc)))
    assert w2.letters == w.letters and t2 == target


def test_schema_rejects_garbage():
    with pytest.raises(DomainError):
        serial.word_from_json({"format": "metabelian-word/1", "n": 4})


def test_shipped_schema_matches_repository_copy():
    assert json.loads((ROOT / "word.schema.json").read_text()) == serial.schema()
