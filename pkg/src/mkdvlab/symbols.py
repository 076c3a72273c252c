"""Frequency-symbol operators: smoothing multiplier, derivatives, rescaling,
sharp splittings, the resonance-corrected trilinear operator, and the Miura
defect of the damped/forced equation.

The smoothing multiplier ``m`` equals 1 below its knee ``N``, follows
``|k|^(s-1) N^(1-s)`` above ``2N``, and is joined on ``[N, 2N]`` by a monotone
C^1 cubic in log-log coordinates matching both endpoint values and slopes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError, InvariantError
from .torus import (
    SpectralField,
    TorusGrid,
    pad_coeffs,
    physical_samples,
    pointwise_cubic,
    _require_same_grid,
)


@dataclass(frozen=True)
class Multiplier:
    """A diagonal Fourier symbol over a grid.

    ``values[i]`` multiplies the amplitude of mode ``grid.mode_indices[i]``.
    Symbols satisfy ``values(-k) == conj(values(k))`` so they map real fields
    to real fields. ``kind``/``kind_params`` identify structured symbols
    (smoothing knee and order, derivative order, band edges) so they can be
    re-evaluated on finer work grids.
    """

    grid: TorusGrid
    values: np.ndarray
    descriptor: str = "custom"
    kind: str = "custom"
    kind_params: tuple = ()

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.n_modes,):
            raise DimensionError("multiplier length does not match grid")
        if not np.all(np.isfinite(v)):
            raise InvariantError("multiplier values must be finite")
        mirrored = np.conj(v[(-np.arange(v.size)) % v.size])
        if np.max(np.abs(v - mirrored)) > 1e-12 * max(1.0, np.max(np.abs(v))):
            raise InvariantError("multiplier breaks Hermitian symmetry")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def smoothing_profile(freqs: np.ndarray, knee: float, s: float) -> np.ndarray:
    """Evaluate the smoothing symbol with the given knee on raw frequencies."""
    a = np.abs(np.asarray(freqs, dtype=np.float64))
    out = np.ones_like(a)
    high = a > 2 * knee
    out[high] = a[high] ** (s - 1.0) * knee ** (1.0 - s)
    mid = (a >= knee) & ~high
    t = np.log2(np.maximum(a[mid], knee) / knee)
    # Hermite cubic in log-log: value/slope (0,0) at N and ((s-1)ln2, s-1) at 2N
    out[mid] = np.exp((s - 1.0) * np.log(2.0) * t * t * (2.0 - t))
    return out


def i_operator(grid: TorusGrid, cutoff: float, s: float) -> Multiplier:
    """Smoothing multiplier: identity below ``cutoff``, order ``s-1`` decay above."""
    if cutoff <= 0:
        raise ConfigurationError("cutoff must be positive")
    vals = smoothing_profile(grid.frequencies, cutoff, s)
    return Multiplier(grid, vals, descriptor=f"i_operator(N={cutoff}, s={s})",
                      kind="i_operator", kind_params=(cutoff, s))


def rescaled_multiplier(grid: TorusGrid, cutoff: float, s: float, lam: float) -> Multiplier:
    """Smoothing multiplier with rescaled knee ``N' = N / lambda``."""
    if lam < 1:
        raise ConfigurationError("lambda must be >= 1")
    knee = cutoff / lam
    if knee < grid.frequency_step:
        raise ConfigurationError(
            f"rescaled knee {knee} is below one frequency step {grid.frequency_step}"
        )
    vals = smoothing_profile(grid.frequencies, knee, s)
    return Multiplier(grid, vals, descriptor=f"i_operator(N={knee}, s={s})",
                      kind="i_operator", kind_params=(knee, s))


def derivative(grid: TorusGrid, order: int) -> Multiplier:
    """Spatial derivative symbol ``(2*pi*i*k)^order`` (Nyquist zeroed when odd)."""
    vals = (2j * np.pi * grid.frequencies) ** order
    if order % 2 == 1:
        vals[grid.nyquist_bin] = 0.0
    return Multiplier(grid, vals, descriptor=f"derivative({order})",
                      kind="derivative", kind_params=(order,))


def band_filter(grid: TorusGrid, lo: float, hi: float) -> Multiplier:
    """Sharp indicator of ``lo <= |k| <= hi``."""
    a = np.abs(grid.frequencies)
    vals = ((a >= lo) & (a <= hi)).astype(np.complex128)
    return Multiplier(grid, vals, descriptor=f"band({lo}, {hi})",
                      kind="band", kind_params=(lo, hi))


def apply_multiplier(mult: Multiplier, field: SpectralField) -> SpectralField:
    if mult.grid != field.grid:
        raise DimensionError("multiplier grid does not match field grid")
    c = mult.values * field.coeffs
    return SpectralField(field.grid, c, mean_zero=field.mean_zero and c[0] == 0)


def rescale(field: SpectralField, lam: float) -> SpectralField:
    """Map ``u`` to ``v(x) = u(x / lambda) / lambda`` on the stretched torus.

    The integer mode content is preserved; physical frequencies shrink by
    ``lambda`` because the target period is ``lambda`` times longer.
    """
    if lam < 1:
        raise ConfigurationError("lambda must be >= 1")
    if lam == 1:
        return field
    target = TorusGrid(field.grid.period * lam, field.grid.n_modes)
    return SpectralField(target, field.coeffs / lam, mean_zero=field.mean_zero)


def split_low_high(field: SpectralField, cutoff: float) -> tuple[SpectralField, SpectralField]:
    """Sharp partition into modes ``|k| < cutoff`` and ``|k| >= cutoff``."""
    if cutoff <= 0:
        raise ConfigurationError("cutoff must be positive")
    low_mask = np.abs(field.grid.frequencies) < cutoff
    low = np.where(low_mask, field.coeffs, 0.0)
    high = np.where(low_mask, 0.0, field.coeffs)
    return (
        SpectralField(field.grid, low, mean_zero=field.mean_zero),
        SpectralField(field.grid, high, mean_zero=True),
    )


def _resonant_planes(u: SpectralField, v: SpectralField, w: SpectralField):
    """Plane sums and doubly-resonant lines of the constrained triple sum."""
    uc, vc, wc = u.coeffs, v.coeffs, w.coeffs
    n = u.grid.n_modes
    idx = (-np.arange(n)) % n
    p_uv = np.sum(uc * vc[idx])   # sum_l u(l) v(-l)
    p_vw = np.sum(vc * wc[idx])
    p_uw = np.sum(uc * wc[idx])
    plane_a = p_uv * wc           # k1 + k2 = 0
    plane_b = p_vw * uc           # k2 + k3 = 0
    plane_c = p_uw * vc           # k3 + k1 = 0
    line_ab = uc * vc[idx] * wc   # (k, -k, k)
    line_ac = uc[idx] * vc * wc   # (-k, k, k)
    line_bc = uc * vc * wc[idx]   # (k, k, -k)
    return plane_a, plane_b, plane_c, line_ab, line_ac, line_bc


def trilinear_j(u: SpectralField, v: SpectralField, w: SpectralField) -> SpectralField:
    """Resonance-corrected trilinear operator.

    The full cubic convolution is dealiased in physical space; the three
    resonant planes are removed by explicit plane sums with inclusion and
    exclusion on the doubly-resonant lines. For real ``u = v = w`` the result
    equals ``(u^2 - mean(u^2)) du/dx``.
    """
    _require_same_grid(u, v)
    _require_same_grid(u, w)
    for name, a in (("u", u), ("v", v), ("w", w)):
        if abs(a.coeffs[0]) > 0:
            raise InvariantError(f"trilinear operator requires mean-zero {name}")
    full = pointwise_cubic(u, v, w).coeffs
    pa, pb, pc, lab, lac, lbc = _resonant_planes(u, v, w)
    nonres = full - pa - pb - pc + lab + lac + lbc
    deriv = 2j * np.pi * u.grid.frequencies
    deriv[u.grid.nyquist_bin] = 0.0
    coeffs = deriv * (nonres / 3.0 - lbc)
    return SpectralField(u.grid, coeffs, mean_zero=True)


def miura_pair(u: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Real and imaginary parts of ``p = du/dx + i u^2`` (band-truncated)."""
    from .torus import pointwise_product

    p_real = apply_multiplier(derivative(u.grid, 1), u)
    p_imag = pointwise_product(u, u)
    return p_real, p_imag


def _embed(field: SpectralField, work: TorusGrid) -> np.ndarray:
    return pad_coeffs(field.coeffs, work.n_modes)


def miura_defect(
    u: SpectralField, f: SpectralField, gamma: float
) -> tuple[SpectralField, SpectralField]:
    """Residual of the KdV equation for ``p = du/dx + i u^2``.

    ``u`` is treated as a snapshot of the focusing damped/forced equation, so
    ``du/dt`` is substituted from it. Returns the real and imaginary parts of
    ``p_t + p_xxx - 6 i p p_x + gamma p`` on a 4x work grid where every product
    is alias-free; algebra reduces this to ``(2iu + d/dx) f - i gamma u^2``.
    """
    _require_same_grid(u, f)
    if gamma < 0:
        raise ConfigurationError("gamma must be nonnegative")
    grid = u.grid
    work = TorusGrid(grid.period, 4 * grid.n_modes)
    dx = 2j * np.pi * work.frequencies

    uc = _embed(u, work)
    fc = _embed(f, work)

    def samples(c):
        return np.fft.ifft(c * work.n_modes).real

    def spectrum(s):
        return np.fft.fft(s) / work.n_modes

    us = samples(uc)
    ux = samples(dx * uc)
    uxx = samples(dx ** 2 * uc)
    u3c = spectrum(us ** 3)
    # focusing equation: u_t = f - gamma u - u_xxx - 2 (u^3)_x
    utc = fc - gamma * uc - dx ** 3 * uc - 2.0 * dx * u3c
    uts = samples(utc)

    r_real = (
        dx * utc
        + dx ** 4 * uc
        + spectrum(12.0 * us * ux ** 2 + 6.0 * us ** 2 * uxx)
        + gamma * dx * uc
    )
    r_imag = (
        spectrum(2.0 * us * uts)
        + dx ** 3 * spectrum(us ** 2)
        + spectrum(-6.0 * ux * uxx + 12.0 * us ** 3 * ux)
        + gamma * spectrum(us ** 2)
    )
    return (
        SpectralField(work, r_real),
        SpectralField(work, r_imag),
    )
