from __future__ import annotations

import pytest

_RESULTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_RESULTS] = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion; returns the flag."""
    results = request.config.stash[_RESULTS]

    def record(criterion: str, passed: bool, detail: str = "") -> bool:
        results.append((criterion, bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in sorted(results, key=lambda r: r[0]):
        line = f"{'PASS' if passed else 'FAIL'}  {criterion}"
        if detail:
            line += f"  -- {detail}"
        terminalreporter.write_line(line)
