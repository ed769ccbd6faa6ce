import numpy as np
import pytest

import kovtop as kt

# One line per acceptance criterion, printed after the run summary.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def params():
    return kt.make_params(2.0, 1.0)


@pytest.fixture(scope="session")
def equilibrium():
    # omega = 0, alpha and beta along the axes they pull on: a fixed point
    # of the flow that happens to lie on the invariant set N.
    return kt.PhaseState([0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 1.0, 0.0])


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
