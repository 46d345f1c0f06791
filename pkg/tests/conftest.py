import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("annuli", deadline=None, max_examples=60)
settings.load_profile("annuli")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def within_sigma(value, target, sigma, k=4.0):
    return abs(value - target) <= k * sigma
