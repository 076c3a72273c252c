"""Time integration of the damped, forced mKdV in Fourier space.

The linear flow (third derivative and damping) is integrated exactly as a
diagonal exponential; the cubic term is advanced with classical RK4 on the
integrating-factor variable. The external forcing is a fixed profile
translated by the accumulated phase ``Phi(t) = integral of ||u||_L2^2``,
realized as the modulation ``f_hat(k) * exp(2*pi*i*k*Phi)``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, replace

import numpy as np

from .errors import BlowupError, ConfigurationError, DimensionError, InvariantError
from .torus import SpectralField, TorusGrid, physical_samples, truncate_to_band


@dataclass(frozen=True)
class ModelParams:
    """Equation parameters.

    ``sign`` is +1 (focusing) or -1 (defocusing); ``renormalized`` selects the
    nonlinearity ``6 (u^2 - mean(u^2)) u_x`` instead of ``2 (u^3)_x``. With
    ``lam > 1`` the run is interpreted as the stretched-torus form, where
    damping and forcing enter with the factor ``lam**-3``.
    """

    gamma: float = 0.0
    sign: int = 1
    renormalized: bool = True
    lam: float = 1.0

    def __post_init__(self):
        if self.gamma < 0:
            raise ConfigurationError("gamma must be nonnegative")
        if self.sign not in (1, -1):
            raise ConfigurationError("sign must be +1 or -1")
        if self.lam < 1:
            raise ConfigurationError("lambda must be >= 1")

    @property
    def gamma_eff(self) -> float:
        return self.gamma * self.lam ** -3

    @property
    def forcing_factor(self) -> float:
        return self.lam ** -3


@dataclass(frozen=True)
class SimState:
    """Solution snapshot: field, time, accumulated phase, parameters, forcing."""

    field: SpectralField
    t: float
    phase: float
    params: ModelParams
    forcing: SpectralField

    def __post_init__(self):
        if abs(self.field.coeffs[0]) > 0:
            raise InvariantError("state field must be mean-zero")
        if abs(self.forcing.coeffs[0]) > 0:
            raise InvariantError("forcing must be mean-zero")
        if self.field.grid != self.forcing.grid:
            raise DimensionError("field and forcing grids differ")
        if self.phase < 0:
            raise InvariantError("accumulated phase cannot be negative")


@dataclass(frozen=True)
class StepperConfig:
    dt: float
    scheme: str = "IFRK4"
    substep_phase: bool = True
    nonlinear: bool = True

    def __post_init__(self):
        if self.dt <= 0:
            raise ConfigurationError("dt must be positive")
        if self.scheme != "IFRK4":
            raise ConfigurationError(f"unknown scheme {self.scheme!r}")


def initial_state(
    field: SpectralField,
    params: ModelParams,
    forcing: SpectralField | None = None,
    t: float = 0.0,
    phase: float = 0.0,
) -> SimState:
    if forcing is None:
        forcing = SpectralField.zeros(field.grid)
    return SimState(field=field, t=t, phase=phase, params=params, forcing=forcing)


def _l2_squared(coeffs: np.ndarray, period: float) -> float:
    return float(np.sum(np.abs(coeffs) ** 2) / period)


def _linear_symbol(grid: TorusGrid, params: ModelParams) -> np.ndarray:
    k = grid.frequencies
    return 8j * np.pi ** 3 * k ** 3 - params.gamma_eff


def _forcing_coeffs(state_forcing: np.ndarray, grid: TorusGrid, phase: float,
                    factor: float) -> np.ndarray:
    return factor * state_forcing * np.exp(2j * np.pi * grid.frequencies * phase)


def _nonlinear_coeffs(coeffs: np.ndarray, grid: TorusGrid, params: ModelParams) -> np.ndarray:
    """Fourier coefficients of the cubic term, dealiased and band-truncated."""
    n = grid.n_modes
    dx = 2j * np.pi * grid.frequencies
    dx[grid.nyquist_bin] = 0.0
    u = np.fft.ifft(_pad2(coeffs, n) * 2 * n).real
    ux = np.fft.ifft(_pad2(dx * coeffs, n) * 2 * n).real
    if params.renormalized:
        mean_sq = float(np.sum(np.abs(coeffs) ** 2))
        cubic = np.fft.fft(u * u * ux) / (2 * n)
        out = -6.0 * params.sign * (truncate_to_band(cubic, n) - mean_sq * dx * coeffs)
    else:
        u3 = np.fft.fft(u * u * u) / (2 * n)
        out = -2.0 * params.sign * dx * truncate_to_band(u3, n)
    out[0] = 0.0
    return out


def _pad2(coeffs: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(2 * n, dtype=np.complex128)
    half = n // 2
    out[:half] = coeffs[:half]
    out[-(half - 1):] = coeffs[-(half - 1):]
    out[half] = 0.5 * coeffs[half]
    out[-half] = 0.5 * np.conj(coeffs[half])
    return out


def rhs(state: SimState) -> SpectralField:
    """Full right-hand side du/dt at the state's time."""
    grid = state.field.grid
    params = state.params
    c = state.field.coeffs
    out = _linear_symbol(grid, params) * c
    out = out + _nonlinear_coeffs(c, grid, params)
    out = out + _forcing_coeffs(state.forcing.coeffs, grid, state.phase,
                                params.forcing_factor)
    out[0] = 0.0
    return SpectralField(grid, out, mean_zero=True)


def stability_dt_bound(state: SimState) -> float:
    """Heuristic step bound ``0.5 / (k_max * max|u|)**2`` for the cubic term.

    ``k_max`` is the largest derivative symbol ``2*pi*|k|`` on the grid. The
    bound is advisory; the stepper relies on its NaN guard at runtime.
    """
    grid = state.field.grid
    umax = float(np.max(np.abs(physical_samples(state.field, 2))))
    kmax = 2 * np.pi * float(np.max(np.abs(grid.frequencies)))
    return 0.5 / (kmax * max(umax, 1e-12)) ** 2


def step(state: SimState, cfg: StepperConfig) -> SimState:
    """Advance one time step with integrating-factor RK4."""
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        return _step_inner(state, cfg)


def _step_inner(state: SimState, cfg: StepperConfig) -> SimState:
    grid = state.field.grid
    params = state.params
    dt = cfg.dt
    lin = _linear_symbol(grid, params)
    e_half = np.exp(0.5 * dt * lin)
    e_full = e_half * e_half

    def nonlin(c, phase):
        out = np.zeros_like(c)
        if cfg.nonlinear:
            out = out + _nonlinear_coeffs(c, grid, params)
        out = out + _forcing_coeffs(state.forcing.coeffs, grid, phase,
                                    params.forcing_factor)
        return out

    c0 = state.field.coeffs
    phi0 = state.phase
    L = grid.period

    r1 = _l2_squared(c0, L)
    n1 = nonlin(c0, phi0)

    c2 = e_half * (c0 + 0.5 * dt * n1)
    p2 = phi0 + 0.5 * dt * r1 if cfg.substep_phase else phi0
    r2 = _l2_squared(c2, L)
    n2 = nonlin(c2, p2)

    c3 = e_half * c0 + 0.5 * dt * n2
    p3 = phi0 + 0.5 * dt * r2 if cfg.substep_phase else phi0
    r3 = _l2_squared(c3, L)
    n3 = nonlin(c3, p3)

    c4 = e_full * c0 + dt * e_half * n3
    p4 = phi0 + dt * r3 if cfg.substep_phase else phi0
    r4 = _l2_squared(c4, L)
    n4 = nonlin(c4, p4)

    c_new = e_full * c0 + (dt / 6.0) * (
        e_full * n1 + 2.0 * e_half * (n2 + n3) + n4
    )
    c_new[0] = 0.0
    if cfg.substep_phase:
        phi_new = phi0 + (dt / 6.0) * (r1 + 2.0 * r2 + 2.0 * r3 + r4)
    else:
        phi_new = phi0 + dt * r1

    if not np.all(np.isfinite(c_new)):
        raise BlowupError(f"solution blew up after t={state.t}", t_last=state.t)

    return replace(
        state,
        field=SpectralField(grid, c_new, mean_zero=True),
        t=state.t + dt,
        phase=phi_new,
    )


def evolve(
    state: SimState,
    t_end: float,
    cfg: StepperConfig,
    observers: tuple = (),
    observer_stride: int = 1,
) -> SimState:
    """Step until ``t_end`` (last partial step shortened exactly).

    Observers are callables ``obs(state)`` invoked at the initial state, every
    ``observer_stride`` full steps, and at the final state.
    """
    if t_end < state.t:
        raise ConfigurationError("t_end precedes current time")
    for obs in observers:
        obs(state)
    if t_end == state.t:
        return state
    span = t_end - state.t
    n_full = int(np.floor(span / cfg.dt * (1 + 1e-12)))
    remainder = span - n_full * cfg.dt
    if remainder < 1e-9 * cfg.dt:
        remainder = 0.0
    t0 = state.t
    for i in range(n_full):
        state = step(state, cfg)
        # suppress accumulated float drift in t
        state = replace(state, t=t0 + (i + 1) * cfg.dt)
        if (i + 1) % observer_stride == 0 and not (remainder == 0.0 and i == n_full - 1):
            for obs in observers:
                obs(state)
    if remainder > 0.0:
        state = step(state, replace(cfg, dt=remainder))
    state = replace(state, t=t_end)
    for obs in observers:
        obs(state)
    return state


CHECKPOINT_MAGIC = b"MKDVCK01"


def write_checkpoint(state: SimState, path) -> None:
    """Binary checkpoint: versioned header, grid metadata, t, phase, coefficients."""
    grid = state.field.grid
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack(
            "<dIddd i? d",
            grid.period, grid.n_modes, state.t, state.phase,
            state.params.gamma, state.params.sign, state.params.renormalized,
            state.params.lam,
        ))
        fh.write(np.ascontiguousarray(state.field.coeffs, dtype=np.complex128).tobytes())
        fh.write(np.ascontiguousarray(state.forcing.coeffs, dtype=np.complex128).tobytes())


def read_checkpoint(path) -> SimState:
    with open(path, "rb") as fh:
        magic = fh.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise ConfigurationError(f"not a checkpoint file: bad magic {magic!r}")
        header = struct.calcsize("<dIddd i? d")
        period, n, t, phase, gamma, sign, renorm, lam = struct.unpack(
            "<dIddd i? d", fh.read(header)
        )
        grid = TorusGrid(period, int(n))
        raw = fh.read()
    coeffs = np.frombuffer(raw, dtype=np.complex128, count=2 * n)
    params = ModelParams(gamma=gamma, sign=int(sign), renormalized=bool(renorm), lam=lam)
    return SimState(
        field=SpectralField(grid, coeffs[:n].copy(), mean_zero=True),
        t=t,
        phase=phase,
        params=params,
        forcing=SpectralField(grid, coeffs[n:].copy(), mean_zero=True),
    )
