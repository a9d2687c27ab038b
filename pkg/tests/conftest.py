import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def random_hermitian():
    def make(rng, d, scale=1.0):
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        return scale * (a + a.conj().T) / 2.0
    return make
