"""Energies, modified energies, increment integrands, and cutoff-scaling runs.

The energy is the physical integral ``E(u) = integral (u_x)^2 - u^4 dx``,
computed by exact quadrature of the band-limited integrand on a 4x work grid.
Along an undamped, unforced trajectory the drift of the smoothed energy
``E(Iu)`` equals the time integral of

    M(t) = M_quartic + M_sextic
    M_quartic = 4 * integral  d^3/dx^3 (Iu) * [(Iu)^3 - I(u^3)] dx
    M_sextic  = 8 * integral  d/dx (Iu)^3  * [(Iu)^3 - I(u^3)] dx

which vanishes identically when the smoothing symbol is 1 on the support of
``u^3``. The two terms are reported separately because their time integrals
scale with different powers of the smoothing cutoff.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import InvariantError
from .integrator import ModelParams, SimState, StepperConfig, evolve, initial_state
from .symbols import Multiplier, apply_multiplier, i_operator, smoothing_profile
from .torus import SpectralField, TorusGrid, norm, pad_coeffs


def _work_arrays(u: SpectralField, factor: int = 4):
    grid = u.grid
    g = factor * grid.n_modes
    work = TorusGrid(grid.period, g)
    c = pad_coeffs(u.coeffs, g)
    return work, c, g


def energy(u: SpectralField) -> float:
    """``integral (u_x)^2 - u^4 dx`` over one period, exactly quadratured."""
    if abs(u.coeffs[0]) > 0:
        raise InvariantError("energy requires a mean-zero field")
    work, c, g = _work_arrays(u)
    dx = 2j * np.pi * work.frequencies
    us = np.fft.ifft(c * g).real
    uxs = np.fft.ifft(dx * c * g).real
    return float(np.sum(uxs ** 2 - us ** 4) * (work.period / g))


def modified_energy(u: SpectralField, mult: Multiplier) -> float:
    return energy(apply_multiplier(mult, u))


def _smoothing_on_work(mult: Multiplier, work: TorusGrid) -> np.ndarray:
    """Re-evaluate a smoothing symbol on the work grid's frequencies."""
    if mult.kind != "i_operator":
        raise InvariantError("increment integrand requires a smoothing multiplier")
    knee, s = mult.kind_params
    return smoothing_profile(work.frequencies, knee, s)


def increment_terms(u: SpectralField, mult: Multiplier, weight: float = 1.0) -> tuple[float, float]:
    """Quartic and sextic parts of the energy-drift integrand at one snapshot.

    The commutator is formed in coefficient space so it vanishes exactly
    (not just to rounding) whenever the symbol is 1 on the cubic support.
    """
    if abs(u.coeffs[0]) > 0:
        raise InvariantError("increment requires a mean-zero field")
    work, c, g = _work_arrays(u)
    m_vals = _smoothing_on_work(mult, work)
    dx = 2j * np.pi * work.frequencies

    w_c = m_vals * c
    w3_hat = np.fft.fft(np.fft.ifft(w_c * g).real ** 3) / g
    u3_hat = np.fft.fft(np.fft.ifft(c * g).real ** 3) / g
    comm_hat = w3_hat - m_vals * u3_hat

    mirror = (-np.arange(g)) % g
    comm_mirror = comm_hat[mirror]
    quartic = 4.0 * work.period * float(np.real(np.sum(dx ** 3 * w_c * comm_mirror)))
    sextic = 8.0 * work.period * float(np.real(np.sum(dx * w3_hat * comm_mirror)))
    return weight * quartic, weight * sextic


def increment_m(u: SpectralField, mult: Multiplier, weight: float = 1.0) -> float:
    q, s = increment_terms(u, mult, weight)
    return q + s


@dataclass(frozen=True)
class EnergyRecord:
    t: float
    l2: float
    hs: float
    h1_of_iu: float
    e_u: float
    e_iu: float
    m_quartic: float | None = None
    m_sextic: float | None = None


CSV_COLUMNS = ("t", "l2", "hs", "h1_of_Iu", "E_u", "E_Iu", "M_quartic", "M_sextic")


@dataclass
class DiagnosticsSeries:
    records: list = dc_field(default_factory=list)

    def append(self, record: EnergyRecord) -> None:
        if self.records and record.t <= self.records[-1].t:
            raise InvariantError("diagnostics records must be strictly increasing in t")
        self.records.append(record)

    def column(self, name: str) -> np.ndarray:
        attr = {"h1_of_Iu": "h1_of_iu", "E_u": "e_u", "E_Iu": "e_iu",
                "M_quartic": "m_quartic", "M_sextic": "m_sextic"}.get(name, name)
        return np.array([getattr(r, attr) for r in self.records], dtype=float)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in self.records:
                writer.writerow([
                    repr(r.t), repr(r.l2), repr(r.hs), repr(r.h1_of_iu),
                    repr(r.e_u), repr(r.e_iu),
                    "" if r.m_quartic is None else repr(r.m_quartic),
                    "" if r.m_sextic is None else repr(r.m_sextic),
                ])

    @classmethod
    def read_csv(cls, path) -> "DiagnosticsSeries":
        series = cls()
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if tuple(header) != CSV_COLUMNS:
                raise InvariantError(f"unexpected diagnostics header {header}")
            for row in reader:
                vals = [float(x) if x != "" else None for x in row]
                series.append(EnergyRecord(*vals))
        return series


class DiagnosticsCollector:
    """Observer that appends one EnergyRecord per call."""

    def __init__(self, mult: Multiplier, s: float, with_increments: bool = False):
        self.mult = mult
        self.s = s
        self.with_increments = with_increments
        self.series = DiagnosticsSeries()

    def __call__(self, state: SimState) -> None:
        u = state.field
        iu = apply_multiplier(self.mult, u)
        mq = ms = None
        if self.with_increments:
            mq, ms = increment_terms(u, self.mult)
        self.series.append(EnergyRecord(
            t=state.t,
            l2=norm(u, "l2"),
            hs=norm(u, "hs", self.s),
            h1_of_iu=norm(iu, "hs", 1.0),
            e_u=energy(u),
            e_iu=energy(iu),
            m_quartic=mq,
            m_sextic=ms,
        ))


def simpson_integral(values: np.ndarray, dt: float) -> float:
    """Composite Simpson on uniform samples (trapezoid closes an odd tail)."""
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return 0.0
    total = 0.0
    n = v.size
    last = n - 1 if (n - 1) % 2 == 0 else n - 2
    if last >= 2:
        total += float(np.sum(v[0:last - 1:2] + 4.0 * v[1:last:2] + v[2:last + 1:2])) * dt / 3.0
    if last != n - 1:
        total += 0.5 * dt * (v[-2] + v[-1])
    return total


@dataclass(frozen=True)
class SlopeReport:
    cutoffs: tuple
    s: float
    horizon: float
    drifts: tuple            # |E(Iu)(T) - E(Iu)(0)| per cutoff
    quartic_integrals: tuple  # | integral M_quartic dt | per cutoff
    sextic_integrals: tuple
    drift_slope: float | None
    quartic_slope: float | None
    sextic_slope: float | None
    degenerate: bool


def _log_slope(xs, ys) -> float | None:
    ys = np.asarray(ys, dtype=float)
    if ys.size < 2 or np.any(ys <= 0):
        return None
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(ys), 1)[0])


def almost_conservation_slope(
    u0: SpectralField,
    s: float,
    cutoffs,
    t_end: float,
    dt: float,
    observer_stride: int = 1,
) -> SlopeReport:
    """Evolve undamped/unforced runs and fit the cutoff-scaling of energy drift.

    For each cutoff the run records ``E(Iu)`` at the endpoints and accumulates
    the quartic/sextic integrands by Simpson over observer samples; returns
    least-squares slopes of the log quantities against the log cutoff. Runs
    whose largest drift sits at rounding level are flagged degenerate.
    """
    params = ModelParams(gamma=0.0, renormalized=True)
    cfg = StepperConfig(dt=dt)
    drifts, q_ints, s_ints = [], [], []
    for cutoff in cutoffs:
        mult = i_operator(u0.grid, cutoff, s)
        collector = DiagnosticsCollector(mult, s, with_increments=True)
        state = initial_state(u0, params)
        evolve(state, t_end, cfg, observers=(collector,), observer_stride=observer_stride)
        series = collector.series
        e_iu = series.column("E_Iu")
        drifts.append(abs(float(e_iu[-1] - e_iu[0])))
        ts = series.column("t")
        stride_dt = float(ts[1] - ts[0])
        q_ints.append(abs(simpson_integral(series.column("M_quartic"), stride_dt)))
        s_ints.append(abs(simpson_integral(series.column("M_sextic"), stride_dt)))
    scale = max(abs(energy(u0)), 1.0)
    degenerate = max(drifts) < 1e-12 * scale
    return SlopeReport(
        cutoffs=tuple(cutoffs),
        s=s,
        horizon=t_end,
        drifts=tuple(drifts),
        quartic_integrals=tuple(q_ints),
        sextic_integrals=tuple(s_ints),
        drift_slope=None if degenerate else _log_slope(cutoffs, drifts),
        quartic_slope=None if degenerate else _log_slope(cutoffs, q_ints),
        sextic_slope=None if degenerate else _log_slope(cutoffs, s_ints),
        degenerate=degenerate,
    )


def l2_envelope(t: np.ndarray, l2_initial: float, gamma: float,
                forcing_l2_sup: float, lam: float = 1.0) -> np.ndarray:
    """Damped-forced L2 envelope from the Gronwall balance.

    ``||u(t)||^2 <= ||u0||^2 exp(-g t) + (||f||_sup / gamma)^2 (1 - exp(-g t))``
    with ``g = gamma * lam**-3``; the equilibrium radius is ``||f|| / gamma``.
    """
    g = gamma * lam ** -3
    decay = np.exp(-g * np.asarray(t, dtype=float))
    return l2_initial ** 2 * decay + (forcing_l2_sup / gamma) ** 2 * (1.0 - decay)
