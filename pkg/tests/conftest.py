import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def cnum(rng, scale=1.0):
    return complex(rng.standard_normal(), rng.standard_normal()) * scale
