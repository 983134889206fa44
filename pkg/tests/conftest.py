import pytest

# Filled by tests/test_acceptance.py: (label, passed, detail).
ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    def record(label, passed, detail=""):
        ACCEPTANCE_LINES.append((label, bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}".rstrip())
