import pytest

_lines: list[str] = []


@pytest.fixture
def acceptance():
    """Collector for the one-line verdicts of the acceptance tests."""
    return _lines.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _lines:
        terminalreporter.section("acceptance")
        for line in _lines:
            terminalreporter.write_line(line)
