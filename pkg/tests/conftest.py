import numpy as np
import pytest

from convlab import CoeffVector, Field, Grid, accel


@pytest.fixture(scope="session", autouse=True)
def _jit_warmup():
    # keep JIT compile time out of every timed section
    accel.warmup()


def random_coeffs(rng: np.random.Generator, max_degree: int = 6, max_a: int = 3) -> CoeffVector:
    n = int(rng.integers(2, max_degree + 1))
    a = rng.integers(0, max_a + 1, size=n - 1)
    if not a.any():
        a[rng.integers(0, n - 1)] = 1
    return CoeffVector([int(v) for v in a])


def random_smooth_field(
    grid: Grid, rng: np.random.Generator, nonneg: bool = False
) -> Field:
    """Band-limited noise: white noise pushed through a spectral Gaussian
    filter, optionally shifted to be non-negative."""
    white = rng.standard_normal(grid.shape)
    norm = np.zeros(grid.shape)
    for xi in grid.frequencies():
        norm = norm + xi**2
    cutoff = (0.125 * grid.points_per_axis / grid.extent) ** 2
    smooth = np.fft.ifftn(np.fft.fftn(white) * np.exp(-norm / cutoff)).real
    if nonneg:
        smooth = smooth - smooth.min()
    return Field(grid, smooth)
