import math

import numpy as np
import pytest

T_GRID = [round(0.05 * k, 2) for k in range(1, 20)]


def bs(T):
    """Hand-written 2x2 splitter matrix, independent of the package."""
    t, r = math.sqrt(T), math.sqrt(1 - T)
    return np.array([[t, 1j * r], [1j * r, t]])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
