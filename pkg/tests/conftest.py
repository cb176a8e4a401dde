"""Collects the acceptance verdicts and prints them after the run."""

import pytest

_VERDICTS: dict = {}


@pytest.fixture
def verdict(request):
    """Call ``verdict(criterion, ok, detail)`` to record one acceptance line."""

    def record(criterion: int, ok: bool, detail: str) -> bool:
        _VERDICTS[criterion] = (bool(ok), detail)
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_VERDICTS):
        ok, detail = _VERDICTS[criterion]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion:2d}: {detail}")
