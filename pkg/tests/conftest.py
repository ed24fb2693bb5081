import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from streamclaims import StreamingProblem

EX_23 = [[10, 0], [20, 0], [0, 70]]
EX_32 = [[1, 1, 1], [1, 1, 95]]


@pytest.fixture
def ex23():
    return StreamingProblem.from_matrix(EX_23)


@pytest.fixture
def ex32():
    return StreamingProblem.from_matrix(EX_32)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
