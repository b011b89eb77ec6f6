"""The ten acceptance criteria, one test each.

Each test prints its ``[PASS]``/``[FAIL]`` line even without ``-s`` so the
log of a plain ``pytest -v`` run doubles as the acceptance report.
"""
import pytest

from kmforge.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"{c[0]:02d}-{c[1]}" for c in CRITERIA])
def test_criterion(number, capsys):
    res = run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail
