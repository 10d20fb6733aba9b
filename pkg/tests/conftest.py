import numpy as np
import pytest

from netgof import load_dataset


@pytest.fixture(scope="session")
def karate():
    return load_dataset("karate")


@pytest.fixture
def rng():
    return np.random.default_rng(20240809)


def random_symmetric(rng, n, scale=1.0):
    M = rng.normal(scale=scale, size=(n, n))
    return (M + M.T) / 2.0
