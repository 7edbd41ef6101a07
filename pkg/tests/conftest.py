import numpy as np
import pytest

from isoband import pava


@pytest.fixture(scope="session", autouse=True)
def warm_numba():
    # first pava call compiles the kernel; keep it out of timed tests
    pava(np.array([2.0, 1.0, 3.0]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
