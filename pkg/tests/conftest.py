import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    def _record(result):
        ACCEPTANCE_LINES.append(result.line())

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
