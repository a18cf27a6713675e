"""Acceptance gate: every criterion at its stated tolerance.

Each test prints its criterion's pass/fail line (run with ``-s`` or rely on
the captured output on failure), so ``pytest tests/test_acceptance.py``
doubles as the acceptance report.  ``pq selftest`` runs the same battery.
"""

import pytest

from phasequant.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    result = criterion()
    status = "PASS" if result.passed else "FAIL"
    print(f"[{status}] {result.cid}: {result.description} -- {result.detail}")
    assert result.passed, f"{result.cid} failed: {result.detail}"
