"""Acceptance suite: one test per criterion, each printing a pass/fail line.

The table is printed in the pytest terminal summary.
"""
import pytest

from conftest import ACCEPTANCE_LINES
from rieszsphere import acceptance


@pytest.fixture(scope="module")
def results():
    res = {r.id: r for r in acceptance.run("full")}
    print()
    for r in sorted(res.values(), key=lambda r: r.id):
        print(r.line())
        ACCEPTANCE_LINES.append(r.line())
    return res


@pytest.mark.parametrize("cid", range(1, len(acceptance.CRITERIA) + 1),
                         ids=[f.__name__ for f in acceptance.CRITERIA])
def test_criterion(results, cid):
    r = results[cid]
    print(r.line())
    assert not r.skipped
    assert r.passed, r.detail
