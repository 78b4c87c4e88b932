import math

import numpy as np
import pytest

from mlzbench.models import build_h5, build_h6

G6 = 0.105
P6 = math.exp(-2 * math.pi * G6**2)  # 0.9330727396...


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def h5_pair():
    return build_h5(1.0, 1.0, 1.0, 0.15, 0.25, 1.0)


@pytest.fixture(scope="session")
def h6():
    return build_h6(1.0, 1.5, 1.0, G6, 1.0)


def random_symmetric(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) * scale
    return 0.5 * (a + a.T)
