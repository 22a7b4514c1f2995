"""Acceptance criteria 1-11, exact, one PASS/FAIL line each.

Run directly with ``python3 tests/test_acceptance.py`` or through pytest; in the
latter case the lines are repeated in the terminal summary.
"""

import io
import time

import pytest

from metabelian import checks, cli

SEED = 0
REPORT: list[str] = []


def criterion_11():
    res = checks.criterion_11(SEED)
    out, err = io.StringIO(), io.StringIO()
    start = time.perf_counter()
    code = cli.run(["selftest", "--seed", str(SEED)], out, err)
    res.seconds += time.perf_counter() - start
    res.check(code == 0, f"selftest exited {code}: {err.getvalue().strip()}")
    res.title += " and selftest exit status"
    return res


RUNNERS = {**{k: crit for k, crit in enumerate(checks.CRITERIA, start=1)}, 11: criterion_11}


def run_criterion(k):
    res = RUNNERS[k]() if k == 11 else RUNNERS[k](SEED)
    line = res.line()
    REPORT.append(line)
    print(line, flush=True)
    return res


@pytest.mark.parametrize("k", sorted(RUNNERS))
def test_criterion(k):
    res = run_criterion(k)
    assert res.passed, res.line()


if __name__ == "__main__":
    results = [run_criterion(k) for k in sorted(RUNNERS)]
    raise SystemExit(0 if all(r.passed for r in results) else 1)
