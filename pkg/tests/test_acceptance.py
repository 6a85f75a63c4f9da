import pytest

from hochcat.acceptance import CRITERIA, run_check

RESULTS = []


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    r = run_check(number)
    RESULTS.append(r)
    print(r.line())
    assert r.ok, r.evidence
    assert r.within_time, f"{r.seconds:.2f}s over the {r.limit}s limit"
