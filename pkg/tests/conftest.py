from __future__ import annotations

import pytest

from simplecch.groups import GroupSpec

CYCLIC = [GroupSpec("cyclic", n) for n in range(2, 13)]
DIHEDRAL = [GroupSpec("dihedral", n) for n in range(2, 9)]
POLY = [GroupSpec(f) for f in ("tetrahedral", "octahedral", "icosahedral")]
ALL_GROUPS = CYCLIC + DIHEDRAL + POLY
SMALL_GROUPS = [GroupSpec("cyclic", n) for n in (2, 3, 4, 7)] + [GroupSpec("dihedral", n) for n in (2, 3, 4, 5)] + POLY


def ids(specs):
    return [str(s) for s in specs]


@pytest.fixture(params=SMALL_GROUPS, ids=ids(SMALL_GROUPS))
def small_spec(request):
    return request.param


# criterion number -> (title, passed, detail); filled by test_acceptance
ACCEPTANCE_RESULTS: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        title, ok, detail = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:>2}. {title} ({detail})")
