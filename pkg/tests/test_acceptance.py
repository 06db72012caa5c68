"""Acceptance criteria at their stated tolerances, one test per criterion.

Each result line is also collected and printed in the pytest terminal
summary.  ``python tests/test_acceptance.py`` prints the same table directly.
"""

import sys

import pytest

from biext.acceptance import CRITERIA, run_all

RESULTS: list = []


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}_{c.__name__}" for i, c in enumerate(CRITERIA, 1)])
def test_criterion(criterion):
    result = criterion(0)
    RESULTS.append(result)
    print(result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    results = run_all(0)
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
