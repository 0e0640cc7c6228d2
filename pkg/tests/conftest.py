import mpmath
import pytest

from subpoisson.precision import DEFAULT_BITS


@pytest.fixture(autouse=True)
def _default_precision():
    with mpmath.workprec(DEFAULT_BITS):
        yield


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
