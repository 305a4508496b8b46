import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "numeric",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("numeric")

from fejerlab.circle import make_grid
from fejerlab.spaces import make_weight


@pytest.fixture(scope="session")
def grid_m1():
    return make_grid(1, 8)


@pytest.fixture(scope="session")
def grid_m4():
    return make_grid(4, 8)


@pytest.fixture(scope="session")
def weight_m4():
    return make_weight(4)


@pytest.fixture(scope="session")
def weight_m8():
    return make_weight(8)


def quadrature_oracle(fn, n_points=200_001):
    """Independent fine uniform midpoint rule for integral of fn over dm."""
    h = 2.0 * math.pi / n_points
    theta = -math.pi + (np.arange(n_points) + 0.5) * h
    return np.sum(fn(theta)) * h / (2.0 * math.pi)
