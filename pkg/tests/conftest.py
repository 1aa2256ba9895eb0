import json
import pathlib

import pytest

ORACLE_PATH = pathlib.Path(__file__).parent / "oracles" / "values.json"

# lines recorded by test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def oracle():
    return json.loads(ORACLE_PATH.read_text())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
