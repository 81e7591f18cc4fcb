import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from twopoint.qubit import BlochVector, PulseSpec  # noqa: E402


@st.composite
def unit_vectors(draw):
    v = np.array([draw(st.floats(-1, 1)) for _ in range(3)])
    while np.linalg.norm(v) < 1e-3:
        v = np.array([0.0, 0.0, 1.0])
    v = v / np.linalg.norm(v)
    return BlochVector(*v)


angles = st.floats(0, 2 * np.pi, allow_nan=False)
pulses = st.builds(PulseSpec, angles, st.floats(-np.pi, np.pi))


def random_unit(rng):
    v = rng.normal(size=3)
    return BlochVector(*(v / np.linalg.norm(v)))


def random_state_rho(rng):
    r = random_unit(rng)
    length = rng.uniform(0, 1)
    return BlochVector(*(length * np.array(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_config(rng, gibbs=None):
    """Random protocol instance; Gibbs ones use the z first-measurement axis."""
    from twopoint.protocol import EnergySpec, ProtocolConfig
    from twopoint.qubit import Z_AXIS

    if gibbs is None:
        gibbs = rng.random() < 0.5
    evolution = PulseSpec(rng.uniform(0, 2 * np.pi), rng.uniform(-np.pi, np.pi))
    if gibbs:
        be = rng.uniform(0, 3)
        return ProtocolConfig(Z_AXIS, random_unit(rng), evolution, beta_E=be, energy=EnergySpec(be))
    return ProtocolConfig(
        random_unit(rng), random_unit(rng), evolution,
        alpha=rng.uniform(0, 1), prep_phase=rng.uniform(-np.pi, np.pi),
    )


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(module.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
