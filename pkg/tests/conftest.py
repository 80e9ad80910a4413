import pytest

# one line per acceptance criterion, echoed after the test summary so the
# pass/fail record survives pytest's output capture
_CRITERIA: list = []


@pytest.fixture
def record_criterion():
    def _record(num, ok, detail):
        line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
        _CRITERIA.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_CRITERIA):
        terminalreporter.line(line)
