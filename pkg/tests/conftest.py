import numpy as np
import pytest
from hypothesis import strategies as st

from rotmode.kernels import available_backends
from rotmode.model import ModelParams

ACCEPTANCE_LINES = []


@st.composite
def params(draw, omega2_min=0.2, omega_max=2.5):
    """ModelParams with omega1 = 1 spanning every regime."""
    omega2 = draw(st.floats(omega2_min, 1.0))
    omega = draw(st.just(0.0) | st.floats(1e-6, omega_max))
    return ModelParams(1.0, omega2, omega)


@st.composite
def stable_params(draw):
    omega2 = draw(st.floats(0.2, 1.0))
    if draw(st.booleans()):
        omega = draw(st.floats(0.0, 0.95)) * omega2
    else:
        omega = 1.0 + draw(st.floats(0.05, 1.5))
    return ModelParams(1.0, omega2, omega)


@pytest.fixture(params=sorted(available_backends()))
def backend(request):
    return available_backends()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20141015)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
