"""The acceptance gate: every criterion must pass within its time limit.

Each criterion prints its own pass line (-v shows one line per criterion);
the timing asserts use the limits pinned in ffzeta.acceptance.CRITERIA.
"""

import time

import pytest

from ffzeta import acceptance


@pytest.mark.parametrize(
    "name,fn,limit", acceptance.CRITERIA, ids=[c[0] for c in acceptance.CRITERIA]
)
def test_criterion(name, fn, limit):
    start = time.monotonic()
    detail = fn()
    elapsed = time.monotonic() - start
    print(f"PASS {name} ({elapsed:.1f}s): {detail}")
    assert elapsed < limit, f"{name} took {elapsed:.1f}s, limit {limit:.0f}s"


def test_run_suite_quick_mode(capsys):
    rc = acceptance.run_suite(quick=True)
    out = capsys.readouterr().out
    assert rc == 0
    assert "SKIP 8-relation-hunter" in out
    assert out.count("PASS") == len(acceptance.CRITERIA) - 1
