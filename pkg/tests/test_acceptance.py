"""Acceptance gate: every criterion runs at its stated tolerance and prints
one PASS/FAIL line (visible with `pytest -s`, or via `fobw verify`)."""

import pytest

from fobw.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("ident", [name for name, _, _ in CRITERIA])
def test_criterion(ident):
    result = run_criterion(ident)
    status = "PASS" if result.passed else "FAIL"
    print(f"{status} {result.ident} [{result.seconds:6.2f}s] {result.description}: {result.detail}")
    assert result.passed, f"{result.ident} failed: {result.detail}"
