"""The thirteen acceptance suites at their stated counts and thresholds.

Each test prints one PASS/FAIL line. Run directly with
``python3 tests/test_acceptance.py`` for the lines alone.
"""

import sys

import pytest

from blc.harness import BUDGET_S, DEFAULT_SEED, SUITES, run_suite
from blc.engine import DEFAULT_FUEL


@pytest.mark.parametrize("suite", SUITES, ids=lambda s: f"c{s.criterion:02d}-{s.name}")
def test_criterion(suite, capsys):
    r = run_suite(suite, seed=DEFAULT_SEED, fuel=DEFAULT_FUEL)
    with capsys.disabled():
        print(f"\n{r.line()}")
        for note in r.details[:3]:
            print(f"    {note[:200]}")
    assert r.elapsed <= BUDGET_S, f"over the {BUDGET_S:.0f}s budget"
    assert r.ok, r.line()


if __name__ == "__main__":
    sys.setrecursionlimit(20000)
    bad = 0
    for s in SUITES:
        r = run_suite(s)
        print(r.line())
        bad += not r.ok
    sys.exit(1 if bad else 0)
