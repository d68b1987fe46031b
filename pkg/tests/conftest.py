import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qcorr import BipartiteState  # noqa: E402

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def bell():
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return BipartiteState(np.outer(v, v), 2, 2)


@pytest.fixture
def cc_state():
    return BipartiteState(np.diag([0.5, 0, 0, 0.5]).astype(complex), 2, 2)
