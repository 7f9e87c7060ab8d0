"""Acceptance gate: every desk-scale criterion at its stated tolerance.

Each test prints one pass/fail line; `fairline bench --suite desk` runs the
same criteria outside pytest.  All comparisons inside the criteria are
exact; the only tolerances are the per-criterion wall-time limits.
"""

import pytest

from fairline.bench import CRITERIA, run_criterion


@pytest.mark.parametrize("ident", sorted(CRITERIA))
def test_criterion(ident, capfd):
    result = run_criterion(ident)
    with capfd.disabled():
        print(result.line(), flush=True)
    assert result.passed, f"criterion {ident}: {result.detail or 'over time limit'}"
