import numpy as np
import pytest

from fellerfeynman import CoefficientFn, Grid1D, GridFunction


@pytest.fixture(scope="session")
def grid():
    return Grid1D(20.0, 1024)


@pytest.fixture(scope="session")
def gaussian_phi(grid):
    return GridFunction.from_callable(grid, lambda q: np.exp(-(q**2) / 2))


@pytest.fixture(scope="session")
def sin_coeff():
    """a(q) = 1 + sin(q)/2, bounded in [1/2, 3/2]."""
    return CoefficientFn.sinusoidal(1.0, 0.5)


def random_nonneg_smooth(grid, rng):
    """Random smooth, genuinely nonnegative datum: a positive Gaussian mixture.

    (Subtracting a nodal minimum from a random function would leave dips below
    zero between nodes, which interpolating steps legitimately reproduce.)
    """
    m = int(rng.integers(2, 6))
    w = rng.uniform(0.1, 1.0, m)
    c = rng.uniform(-8.0, 8.0, m)
    s = rng.uniform(0.5, 2.0, m)
    f = np.sum(w[:, None] * np.exp(-((grid.nodes[None, :] - c[:, None]) ** 2) / (2 * s[:, None] ** 2)), axis=0)
    return GridFunction(grid, f.astype(complex))
