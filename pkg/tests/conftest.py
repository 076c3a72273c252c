import numpy as np
import pytest

from mkdvlab.torus import SpectralField, TorusGrid


def make_random_banded(grid: TorusGrid, rng: np.random.Generator,
                       scale: float = 0.3, decay: float = 0.0,
                       top: int | None = None) -> SpectralField:
    """Random real mean-zero field, strictly band-limited (Nyquist-free)."""
    n = grid.n_modes
    top = top if top is not None else n // 2 - 1
    c = np.zeros(n, dtype=np.complex128)
    ms = np.arange(1, top + 1)
    mags = scale * (1.0 + ms) ** (-decay)
    z = rng.standard_normal(ms.size) + 1j * rng.standard_normal(ms.size)
    c[ms] = mags * z / np.sqrt(2)
    c[-ms] = np.conj(c[ms])
    return SpectralField(grid, c, mean_zero=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
