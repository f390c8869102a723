import math

import numpy as np
import pytest

from xyfreeze.chain import ChainSpec

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def weak(n, l1, l2, gamma=0.0, beta=math.inf):
    return ChainSpec.weak_end(n, l1, l2, gamma=gamma, beta=beta)
