import numpy as np
import pytest
from hypothesis import strategies as st

from bellsim.linalg import Direction


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def _direction(v):
    return Direction(*v)


directions = (
    st.tuples(*[st.floats(-1, 1, allow_nan=False)] * 3)
    .filter(lambda v: sum(c * c for c in v) > 1e-4)
    .map(_direction)
)


def random_density(rng, dim=2):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
