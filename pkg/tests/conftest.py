import numpy as np
import pytest

from pmcomb import symplectic


def random_symplectic(n, rng, scale=0.3):
    """exp of a random Hamiltonian generator Omega @ H with H symmetric."""
    H = rng.normal(size=(2 * n, 2 * n)) * scale
    H = H + H.T
    return symplectic.expm(symplectic.symplectic_form(n) @ H)


@pytest.fixture
def rng():
    return np.random.default_rng(20201016)
