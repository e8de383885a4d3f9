import random
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

# criterion lines recorded by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def reference_costs_path():
    return DATA / "reference_oracle_costs.json"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
