import numpy as np
import pytest

from quadsuite import pure_state, state_from_matrix


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def random_pure():
    """Factory for random pure states with given Fock support and dim."""

    def make(rng, support, dim):
        amps = rng.normal(size=support) + 1j * rng.normal(size=support)
        amps /= np.linalg.norm(amps)
        return pure_state(amps, dim)

    return make


@pytest.fixture
def random_mixed():
    """Factory for random full-rank density matrices."""

    def make(rng, dim):
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = a @ a.conj().T
        return state_from_matrix(rho / np.trace(rho).real)

    return make
