"""Acceptance suite: one PASS/FAIL line per criterion, printed even under capture."""
import pytest

from singdyn.acceptance import CHECKS


@pytest.mark.parametrize("number", sorted(CHECKS), ids=lambda k: f"criterion_{k}")
def test_criterion(number, capsys):
    result = CHECKS[number]()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
