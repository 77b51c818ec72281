import pytest

GATE_LINES: dict[int, str] = {}


@pytest.fixture
def gate():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, passed: bool, text: str) -> None:
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} {text}"
        GATE_LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if GATE_LINES:
        terminalreporter.section("acceptance gate")
        for n in sorted(GATE_LINES):
            terminalreporter.write_line(GATE_LINES[n])
