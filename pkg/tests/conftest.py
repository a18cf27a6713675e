import numpy as np
import pytest

from phasequant import make_grid, standard_window
from phasequant.grid import WaveFunction


@pytest.fixture(scope="session")
def grid():
    """Default desk-scale fixture: N = 128, L = 8, hbar = 1."""
    return make_grid(128, 8.0, 1.0)


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64, 8.0, 1.0)


@pytest.fixture(scope="session")
def grid8():
    return make_grid(8, 4.0, 1.0)


@pytest.fixture(scope="session")
def phi0(grid):
    return standard_window("gaussian", grid)


@pytest.fixture(scope="session")
def hermite1(grid):
    return standard_window("hermite1", grid)


@pytest.fixture(scope="session")
def displaced(grid):
    return standard_window("displaced_gaussian", grid, center=(1.0, 0.5))


def random_state(grid, seed=0, band=8):
    """Deterministic smooth random state: low-order Hermite superposition."""
    from phasequant.oracles import hermite_state

    rng = np.random.default_rng(seed)
    coef = rng.normal(size=band) + 1j * rng.normal(size=band)
    samples = sum(c * hermite_state(k, grid).samples for k, c in enumerate(coef))
    samples /= np.sqrt(np.sum(np.abs(samples) ** 2) * grid.dx)
    return WaveFunction(grid, samples)
