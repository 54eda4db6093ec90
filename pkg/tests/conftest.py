import numpy as np
import pytest

from whfactor.realization import StateSpaceSystem

ACCEPTANCE_LINES = []


@pytest.fixture
def sys_shift():
    """F(z) = 0.5 z."""
    return StateSpaceSystem(0.0, 1.0, 0.5, 0.0)


@pytest.fixture
def sys_antistable():
    """F(z) = 0.4 z / (1 - 2z)."""
    return StateSpaceSystem(2.0, 0.4, 1.0, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
