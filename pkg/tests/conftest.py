import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from bloch_complexity.states import PureState

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

R2 = math.sqrt(2.0)
P = math.sqrt(2.0 + R2) / 2.0
M = math.sqrt(2.0 - R2) / 2.0


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


finite = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


@st.composite
def states(draw):
    """Haar-ish states from four bounded reals, rejecting the zero vector."""
    v = np.array([draw(finite) + 1j * draw(finite), draw(finite) + 1j * draw(finite)])
    n = np.linalg.norm(v)
    if n < 1e-3:
        v, n = np.array([1.0 + 0j, 0.0]), 1.0
    return PureState.from_vector(v / n)


@st.composite
def fields(draw, min_norm=0.1):
    h = np.array([draw(st.floats(-3.0, 3.0)) for _ in range(3)])
    n = np.linalg.norm(h)
    if n < min_norm:
        h = np.array([0.0, 0.0, 1.0])
    return h
