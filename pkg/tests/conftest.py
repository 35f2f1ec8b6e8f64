import numpy as np
import pytest

from bievolve import verify


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def sigma_x():
    return verify.SIGMA_X.copy()


@pytest.fixture
def sigma_y():
    return verify.SIGMA_Y.copy()


@pytest.fixture
def sigma_z():
    return verify.SIGMA_Z.copy()


@pytest.fixture
def random_hermitian():
    return verify.random_hermitian


@pytest.fixture
def random_state():
    return verify.random_state
