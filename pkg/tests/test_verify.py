import math

import pytest

from capslep.capop import CapProblem
from capslep.verify import GROUPS, CheckResult, run_suite


def test_check_result_line():
    ok = CheckResult("demo", 1e-15, 1e-12)
    assert ok.ok and ok.line().startswith("PASS demo")
    bad = CheckResult("demo", 1.0, 1e-12)
    assert not bad.ok and bad.line().startswith("FAIL demo")


@pytest.mark.parametrize("L,theta", [(12, math.pi / 3), (1, math.pi), (5, 0.3)])
def test_suite_passes(L, theta):
    results = run_suite(CapProblem(L, theta))
    assert len(results) == len(GROUPS) >= 10
    failed = [r.line() for r in results if not r.ok]
    assert not failed


def test_group_names_unique():
    names = [name for name, _, _ in GROUPS]
    assert len(set(names)) == len(names)
