"""The twelve acceptance criteria, one test each.

Each result line is collected and printed in the terminal summary (see conftest).
"""

import pytest

from cmzg.acceptance import CRITERIA, run_criterion

RESULTS = []


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number):
    res = run_criterion(number)
    RESULTS.append(res)
    print(res.line())
    assert res.ok, res.detail


if __name__ == "__main__":
    for k in range(1, len(CRITERIA) + 1):
        print(run_criterion(k).line(), flush=True)
