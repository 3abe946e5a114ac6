import pytest

from hopfcross.catalog import DEFAULT_CATALOG, load_entry

ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def catalog():
    return {name: load_entry(name).coaction for name in DEFAULT_CATALOG}


@pytest.fixture
def record_criterion():
    """Store and print one pass/fail line for an acceptance criterion."""
    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
