import pytest

# one line per acceptance criterion, filled in by test_acceptance.py
CRITERIA = {}


def report_criterion(number, title, passed, detail):
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    CRITERIA[number] = line
    print(line)
    return passed


@pytest.fixture
def report():
    return report_criterion


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[number])
