import pytest

ACCEPTANCE = {}


def record(number, ok, detail=""):
    """Store one acceptance line; printed in the terminal summary."""
    ACCEPTANCE[number] = (bool(ok), detail)
    return ok


@pytest.fixture
def accept():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
