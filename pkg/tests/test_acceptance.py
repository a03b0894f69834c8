"""One test per acceptance criterion; each prints a PASS/FAIL line (run with -s to see them)."""
import pytest

from sheafradon import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number):
    res = acceptance.run(number)
    print(res.line())
    assert res.passed, res.details
