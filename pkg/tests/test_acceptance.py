"""One line per acceptance criterion, evaluated at the stated tolerances.

The lines are collected into an ``acceptance criteria`` section of the
pytest terminal summary.
"""

import pytest

from boundfuel.acceptance import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion_{n:02d}_{CRITERIA[n].__name__}")
def test_criterion(number, acceptance_log):
    result = CRITERIA[number]()
    print(result.line())
    acceptance_log.append(result.line())
    assert result.passed, result.line()
