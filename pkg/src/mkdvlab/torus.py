"""Fourier grids, real spectral fields, transforms, and static norms on a torus.

Conventions used everywhere in this package:

* basis functions are ``exp(2*pi*i*k*x)`` with frequencies ``k = m / period``
  for integer mode index ``m`` (fft layout),
* coefficients are mode amplitudes, ``u(x) = sum_k c(k) exp(2*pi*i*k*x)``,
* lattice norms carry the counting-measure weight ``1/period`` per mode,
  e.g. ``||u||_L2^2 = (1/L) * sum_k |c(k)|^2``,
* the Sobolev weight is ``<k> = 1 + |k|`` (not ``sqrt(1+k^2)``).

Real fields are stored with full Hermitian symmetry ``c(-k) == conj(c(k))``.
The Nyquist bin of an even grid is self-paired (must be real); fields built
by the dynamics are strictly band-limited to ``|m| <= n/2 - 1`` so that cubic
products are exactly dealiased by factor-2 zero padding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvariantError

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class TorusGrid:
    """Uniform Fourier grid on a torus of length ``period`` with ``n_modes`` bins."""

    period: float
    n_modes: int

    def __post_init__(self):
        if not self.period > 0:
            raise DimensionError(f"period must be positive, got {self.period}")
        if self.n_modes < 4 or self.n_modes % 2 != 0:
            raise DimensionError(f"n_modes must be even and >= 4, got {self.n_modes}")

    @property
    def frequency_step(self) -> float:
        return 1.0 / self.period

    @property
    def mode_indices(self) -> np.ndarray:
        """Integer mode indices in fft layout: 0, 1, ..., n/2-1, -n/2, ..., -1."""
        n = self.n_modes
        return np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)

    @property
    def frequencies(self) -> np.ndarray:
        """Physical frequencies k = m / period in fft layout."""
        return self.mode_indices / self.period

    @property
    def nyquist_bin(self) -> int:
        return self.n_modes // 2

    def sample_points(self, refinement: int = 1) -> np.ndarray:
        n = self.n_modes * refinement
        return np.arange(n) * (self.period / n)


def _check_hermitian(coeffs: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    scale = max(1.0, float(np.max(np.abs(coeffs))) if coeffs.size else 1.0)
    mirrored = np.conj(coeffs[(-np.arange(coeffs.size)) % coeffs.size])
    err = float(np.max(np.abs(coeffs - mirrored)))
    if err > tol * scale:
        raise InvariantError(f"Hermitian symmetry violated: max deviation {err:.3e}")


@dataclass(frozen=True)
class SpectralField:
    """Complex Fourier coefficients of a real periodic function.

    ``coeffs[i]`` is the amplitude of mode ``grid.mode_indices[i]``. The field
    is immutable; all operations return new instances.
    """

    grid: TorusGrid
    coeffs: np.ndarray
    mean_zero: bool = False

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (self.grid.n_modes,):
            raise DimensionError(
                f"expected {self.grid.n_modes} coefficients, got shape {c.shape}"
            )
        _check_hermitian(c)
        if self.mean_zero and c[0] != 0:
            raise InvariantError("mean_zero field has nonzero coefficient at k=0")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, grid: TorusGrid, mean_zero: bool = True) -> "SpectralField":
        return cls(grid, np.zeros(grid.n_modes, dtype=np.complex128), mean_zero)

    @classmethod
    def from_modes(cls, grid: TorusGrid, amplitudes: dict) -> "SpectralField":
        """Build a real field from ``{mode_index: complex amplitude}``.

        The conjugate partner ``-m`` is filled in automatically unless given.
        """
        c = np.zeros(grid.n_modes, dtype=np.complex128)
        n = grid.n_modes
        given = {m % n for m in amplitudes}
        for m, a in amplitudes.items():
            if abs(m) >= n // 2 and m != 0:
                raise DimensionError(f"mode {m} outside strict band of n={n}")
            c[m % n] = a
        for m, a in amplitudes.items():
            if (-m) % n not in given:
                c[(-m) % n] = np.conj(a)
        return cls(grid, c, mean_zero=(c[0] == 0))

    def amplitude(self, mode: int) -> complex:
        return complex(self.coeffs[mode % self.grid.n_modes])

    def max_abs_frequency(self) -> float:
        nz = np.abs(self.coeffs) > 0
        if not nz.any():
            return 0.0
        return float(np.max(np.abs(self.grid.frequencies[nz])))


def forward_transform(samples: np.ndarray, grid: TorusGrid) -> SpectralField:
    """Transform real uniform-grid samples to spectral amplitudes."""
    s = np.asarray(samples, dtype=np.float64)
    if s.shape != (grid.n_modes,):
        raise DimensionError(
            f"expected {grid.n_modes} samples, got shape {s.shape}"
        )
    coeffs = np.fft.fft(s) / grid.n_modes
    return SpectralField(grid, coeffs, mean_zero=False)


def inverse_transform(field: SpectralField) -> np.ndarray:
    """Evaluate a Hermitian field at the uniform grid points, returning reals."""
    n = field.grid.n_modes
    samples = np.fft.ifft(field.coeffs * n)
    scale = max(1.0, float(np.max(np.abs(samples))))
    resid = float(np.max(np.abs(samples.imag)))
    if resid > 1e-12 * scale:
        raise InvariantError(f"imaginary residue {resid:.3e} after inverse transform")
    return samples.real


def pad_coeffs(coeffs: np.ndarray, n_fine: int) -> np.ndarray:
    """Zero-pad fft-layout amplitudes to a finer grid, splitting the Nyquist bin."""
    n = coeffs.size
    if n_fine < n:
        raise DimensionError("padding target smaller than source")
    if n_fine == n:
        return coeffs.copy()
    out = np.zeros(n_fine, dtype=np.complex128)
    half = n // 2
    out[: half] = coeffs[: half]
    out[-(half - 1):] = coeffs[-(half - 1):]
    # self-paired Nyquist amplitude becomes a +/- pair on the fine grid
    out[half] = 0.5 * coeffs[half]
    out[-half] = 0.5 * np.conj(coeffs[half])
    return out


def physical_samples(field: SpectralField, refinement: int = 1) -> np.ndarray:
    """Real samples of the field on a ``refinement``-times finer uniform grid."""
    n_fine = field.grid.n_modes * refinement
    c = pad_coeffs(field.coeffs, n_fine) if refinement > 1 else field.coeffs
    return np.fft.ifft(c * n_fine).real


def truncate_to_band(coeffs_fine: np.ndarray, n: int) -> np.ndarray:
    """Keep modes ``|m| <= n/2 - 1`` of a finer fft-layout array (Nyquist zeroed)."""
    half = n // 2
    out = np.zeros(n, dtype=np.complex128)
    out[: half] = coeffs_fine[: half]
    out[-(half - 1):] = coeffs_fine[-(half - 1):]
    return out


def pointwise_product(a: SpectralField, b: SpectralField) -> SpectralField:
    """Dealiased product of two fields, truncated to the strict band."""
    _require_same_grid(a, b)
    n = a.grid.n_modes
    sa = physical_samples(a, 2)
    sb = physical_samples(b, 2)
    prod = np.fft.fft(sa * sb) / (2 * n)
    return SpectralField(a.grid, truncate_to_band(prod, n), mean_zero=False)


def pointwise_cubic(a: SpectralField, b: SpectralField, c: SpectralField) -> SpectralField:
    """Exact triple product ``a*b*c`` of strictly banded fields.

    Zero-pads by factor 2, multiplies in physical space, transforms back and
    truncates to ``|m| <= n/2 - 1``; aliases of the cubic spectrum cannot reach
    the retained band, so the result matches the direct triple convolution.
    """
    _require_same_grid(a, b)
    _require_same_grid(a, c)
    n = a.grid.n_modes
    sa = physical_samples(a, 2)
    sb = physical_samples(b, 2)
    sc = physical_samples(c, 2)
    prod = np.fft.fft(sa * sb * sc) / (2 * n)
    return SpectralField(a.grid, truncate_to_band(prod, n), mean_zero=False)


def _require_same_grid(a: SpectralField, b: SpectralField) -> None:
    if a.grid != b.grid:
        raise DimensionError(f"grid mismatch: {a.grid} vs {b.grid}")


def sobolev_weight(frequencies: np.ndarray, s: float, homogeneous: bool = False) -> np.ndarray:
    if homogeneous:
        w = np.abs(frequencies) ** s if s != 0 else (np.abs(frequencies) > 0).astype(float)
        if s < 0:
            w = np.where(np.abs(frequencies) > 0, w, 0.0)
        return w
    return (1.0 + np.abs(frequencies)) ** s


def norm(field: SpectralField, kind: str, s: float | None = None) -> float:
    """Static norm of a field.

    ``kind`` is one of ``l2``, ``l4``, ``hs``, ``hs_dot``. The lattice kinds
    carry the ``1/period`` counting-measure weight; ``l4`` is the physical
    integral of ``u^4`` computed exactly on the factor-2 padded grid.
    """
    grid = field.grid
    if kind == "l2":
        return float(np.sqrt(np.sum(np.abs(field.coeffs) ** 2) / grid.period))
    if kind == "l4":
        u = physical_samples(field, 2)
        integral = np.sum(u ** 4) * (grid.period / u.size)
        return float(integral ** 0.25)
    if kind == "hs":
        if s is None:
            raise InvariantError("hs norm requires an order s")
        w = sobolev_weight(grid.frequencies, s)
        return float(np.sqrt(np.sum((w * np.abs(field.coeffs)) ** 2) / grid.period))
    if kind == "hs_dot":
        if s is None:
            raise InvariantError("hs_dot norm requires an order s")
        if abs(field.coeffs[0]) > 0:
            raise InvariantError("homogeneous norm requires a mean-zero field")
        w = sobolev_weight(grid.frequencies, s, homogeneous=True)
        return float(np.sqrt(np.sum((w * np.abs(field.coeffs)) ** 2) / grid.period))
    raise InvariantError(f"unknown norm kind {kind!r}")


def inner_product_l2(a: SpectralField, b: SpectralField) -> float:
    """Lattice L2 pairing ``(1/L) * Re sum_k a(k) conj(b(k))``."""
    _require_same_grid(a, b)
    return float(np.real(np.sum(a.coeffs * np.conj(b.coeffs))) / a.grid.period)


def mean_of_square(field: SpectralField) -> float:
    """Spatial mean of ``u^2``, i.e. ``(1/L) * integral(u^2 dx) = sum_k |c(k)|^2``."""
    return float(np.sum(np.abs(field.coeffs) ** 2))
