"""Every acceptance criterion at its stated tolerance, one pass/fail line each."""

import pytest

from blaschke_lab import acceptance
from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("check", acceptance.CRITERIA, ids=lambda c: c.__name__.replace("_criterion", ""))
def test_criterion(check):
    res = acceptance.run_criterion(check)
    line = f"{res.line()}  ({res.runtime:.2f} s)"
    ACCEPTANCE_LINES.append((res.number, line))
    print(line)
    print(res.details)
    assert res.passed, res.details
