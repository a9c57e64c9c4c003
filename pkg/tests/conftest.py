"""Shared test helpers: per-criterion result lines for the acceptance suite.

The acceptance tests record one human-readable pass/fail line each; the
terminal-summary hook prints them at the end of the run so they are
visible regardless of output capturing.
"""

from __future__ import annotations

import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Callable fixture: acceptance tests record their verdict line here."""

    def record(line: str) -> None:
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
