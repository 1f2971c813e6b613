"""Shared test fixtures.

The ``acceptance`` fixture lets the end-to-end gate tests record a
one-line verdict per criterion; the collected lines are printed as a
summary section after the run so the whole gate can be read at a glance.
"""

import pytest

_RESULTS: list[tuple[int, bool, str]] = []


@pytest.fixture
def acceptance():
    """Returns a recorder: ``record(criterion, passed, detail) -> passed``."""

    def record(criterion: int, passed: bool, detail: str) -> bool:
        _RESULTS.append((criterion, passed, detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in sorted(_RESULTS):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {criterion}: {verdict} - {detail}")
