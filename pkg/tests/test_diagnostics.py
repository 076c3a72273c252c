"""Energy, modified energy, increment integrand, and series tests."""

import numpy as np
import pytest

from mkdvlab.diagnostics import (
    DiagnosticsCollector,
    DiagnosticsSeries,
    EnergyRecord,
    almost_conservation_slope,
    energy,
    increment_m,
    increment_terms,
    modified_energy,
    simpson_integral,
)
from mkdvlab.errors import InvariantError
from mkdvlab.integrator import ModelParams, StepperConfig, evolve, initial_state
from mkdvlab.symbols import i_operator
from mkdvlab.torus import SpectralField, TorusGrid, pad_coeffs

from conftest import make_random_banded


class TestEnergy:
    def test_zero_field(self):
        assert energy(SpectralField.zeros(TorusGrid(2 * np.pi, 16))) == 0.0

    def test_cosine_closed_form(self):
        # E(cos x) on the 2 pi torus: pi - 3 pi / 4
        grid = TorusGrid(2 * np.pi, 16)
        u = SpectralField.from_modes(grid, {1: 0.5})
        assert energy(u) == pytest.approx(np.pi / 4, rel=1e-13)

    def test_amplitude_closed_form(self):
        # E(a cos x) = pi a^2 - 3 pi a^4 / 4
        grid = TorusGrid(2 * np.pi, 32)
        a = 0.7
        u = SpectralField.from_modes(grid, {1: a / 2})
        assert energy(u) == pytest.approx(np.pi * a ** 2 - 0.75 * np.pi * a ** 4,
                                          rel=1e-13)

    def test_matches_convolution_oracle(self, rng):
        """Both terms against direct quadratic/quartic coefficient sums."""
        grid = TorusGrid(2 * np.pi, 16)
        u = make_random_banded(grid, rng, scale=0.2)
        n = grid.n_modes
        idx = grid.mode_indices
        k = grid.frequencies
        # integral (u_x)^2 dx = L * sum_{m} (2 pi k_m)^2 c_m c_{-m}
        dx2 = 0.0
        for i in range(n):
            dx2 += (2 * np.pi * k[i]) ** 2 * (u.coeffs[i] * u.coeffs[(-idx[i]) % n]).real
        dx2 *= grid.period
        # integral u^4 dx = L * sum over quadruples summing to zero
        quart = 0.0
        for i1 in range(n):
            for i2 in range(n):
                for i3 in range(n):
                    m4 = -(idx[i1] + idx[i2] + idx[i3])
                    if abs(m4) <= n // 2 - 1:
                        quart += (u.coeffs[i1] * u.coeffs[i2] * u.coeffs[i3]
                                  * u.coeffs[m4 % n]).real
        quart *= grid.period
        assert energy(u) == pytest.approx(dx2 - quart, abs=1e-10)


class TestModifiedEnergy:
    def test_equals_energy_when_knee_above_band(self, rng):
        grid = TorusGrid(2 * np.pi, 32)
        u = make_random_banded(grid, rng)
        mult = i_operator(grid, 1000.0, 0.5)
        assert modified_energy(u, mult) == pytest.approx(energy(u), rel=1e-13)

    def test_zero_field(self):
        grid = TorusGrid(2 * np.pi, 16)
        mult = i_operator(grid, 2.0, 0.5)
        assert modified_energy(SpectralField.zeros(grid), mult) == 0.0

    def test_high_mode_symbol_arithmetic(self):
        # single pair far above the knee: quadratic term dominates and carries m(k)^2
        grid = TorusGrid(2 * np.pi, 256)
        m_idx = 100
        a = 1e-3
        u = SpectralField.from_modes(grid, {m_idx: a})
        cutoff = 2.0
        mult = i_operator(grid, cutoff, 0.5)
        k = grid.frequencies[m_idx]
        mval = abs(k) ** -0.5 * cutoff ** 0.5
        # Iu = 2 m(k) a cos(2 pi k x + phi): integral (d/dx Iu)^2 = 2 L (2 pi k m a)^2
        expected_quad = 2 * grid.period * (2 * np.pi * k * mval * a) ** 2
        got = modified_energy(u, mult)
        # quartic correction is O(a^4), far below the quadratic term
        assert got == pytest.approx(expected_quad, rel=1e-6)


class TestIncrement:
    def test_zero_when_knee_above_cubic_band(self, rng):
        grid = TorusGrid(2 * np.pi, 32)
        u = make_random_banded(grid, rng)
        mult = i_operator(grid, 1e6, 0.5)
        q, s = increment_terms(u, mult)
        assert abs(q) < 1e-12 and abs(s) < 1e-12

    def test_zero_when_support_below_quarter_knee(self, rng):
        grid = TorusGrid(2 * np.pi, 64)
        u = make_random_banded(grid, rng, top=4)
        mult = i_operator(grid, 4 * grid.frequencies[4], 0.5)
        q, s = increment_terms(u, mult)
        assert abs(q) < 1e-12 and abs(s) < 1e-12

    def test_weight_scales_linearly(self, rng):
        grid = TorusGrid(2 * np.pi, 32)
        u = make_random_banded(grid, rng)
        mult = i_operator(grid, 0.5, 0.5)
        q1, s1 = increment_terms(u, mult, weight=1.0)
        q2, s2 = increment_terms(u, mult, weight=2.5)
        assert q2 == pytest.approx(2.5 * q1, rel=1e-13)
        assert s2 == pytest.approx(2.5 * s1, rel=1e-13)
        assert increment_m(u, mult) == pytest.approx(q1 + s1, rel=1e-13)

    def test_matches_quadruple_sum_oracle(self, rng):
        """Quartic term against a direct constrained four-fold sum."""
        grid = TorusGrid(2 * np.pi, 16)
        u = make_random_banded(grid, rng, scale=0.3)
        cutoff = 2 * grid.frequencies[2]  # knee inside the band
        mult = i_operator(grid, cutoff, 0.5)
        q, s = increment_terms(u, mult)

        n = grid.n_modes
        work = TorusGrid(grid.period, 4 * n)
        cw = pad_coeffs(u.coeffs, work.n_modes)
        from mkdvlab.symbols import smoothing_profile

        mv = smoothing_profile(work.frequencies, cutoff, 0.5)
        idx = work.mode_indices
        g = work.n_modes
        # commutator coefficients: sum over triples of [m2 m3 m4 - m(sum)] c c c
        w_c = mv * cw
        us = np.fft.ifft(cw * g)
        ws = np.fft.ifft(w_c * g)
        w3 = np.fft.fft(ws ** 3) / g
        u3 = np.fft.fft(us ** 3) / g
        comm = w3 - mv * u3
        dx3 = (2j * np.pi * work.frequencies) ** 3
        # integral dx of (dx^3 w) * comm = L sum_m (dx3 w)(m) comm(-m)
        total = 0.0
        for i in range(g):
            total += (dx3[i] * w_c[i] * comm[(-idx[i]) % g]).real
        expected_q = 4.0 * grid.period * total
        assert q == pytest.approx(expected_q, rel=1e-10)

    def test_equals_energy_derivative_along_flow(self, rng):
        """Centered differencing of E(Iu) along an undamped trajectory."""
        grid = TorusGrid(2 * np.pi, 32)
        u0 = make_random_banded(grid, rng, scale=0.15, decay=1.0, top=10)
        cutoff = 3 * grid.frequency_step
        mult = i_operator(grid, cutoff, 0.5)
        cfg = StepperConfig(dt=5e-5)
        st = evolve(initial_state(u0, ModelParams()), 0.05, cfg)
        h = 5e-5
        states = [st]
        for _ in range(4):
            states.append(evolve(states[-1], states[-1].t + h, cfg))
        es = [modified_energy(s.field, mult) for s in states]
        # 4th-order centered first derivative at the middle state
        dedt = (es[0] - 8 * es[1] + 8 * es[3] - es[4]) / (12 * h)
        m_val = increment_m(states[2].field, mult)
        assert abs(dedt - m_val) < 1e-5


class TestSeries:
    def test_strictly_increasing_t(self):
        series = DiagnosticsSeries()
        series.append(EnergyRecord(0.0, 1, 1, 1, 1, 1))
        with pytest.raises(InvariantError):
            series.append(EnergyRecord(0.0, 1, 1, 1, 1, 1))

    def test_csv_round_trip(self, tmp_path, rng):
        grid = TorusGrid(2 * np.pi, 32)
        u0 = make_random_banded(grid, rng, scale=0.2)
        mult = i_operator(grid, 1.0, 0.5)
        coll = DiagnosticsCollector(mult, 0.5, with_increments=True)
        evolve(initial_state(u0, ModelParams()), 0.01, StepperConfig(dt=1e-3),
               observers=(coll,))
        path = tmp_path / "diag.csv"
        coll.series.write_csv(path)
        back = DiagnosticsSeries.read_csv(path)
        assert len(back.records) == len(coll.series.records)
        for a, b in zip(back.records, coll.series.records):
            assert a == b
        header = path.read_text().splitlines()[0]
        assert header == "t,l2,hs,h1_of_Iu,E_u,E_Iu,M_quartic,M_sextic"


class TestSimpson:
    def test_cubic_exact(self):
        xs = np.linspace(0, 1, 11)
        vals = xs ** 3
        assert simpson_integral(vals, xs[1] - xs[0]) == pytest.approx(0.25, abs=1e-14)

    def test_short_inputs(self):
        assert simpson_integral(np.array([1.0]), 0.1) == 0.0
        assert simpson_integral(np.array([1.0, 1.0]), 0.1) == pytest.approx(0.1)


class TestSlopeExperiment:
    def test_degenerate_flag_for_low_data(self, rng):
        grid = TorusGrid(2 * np.pi, 64)
        u0 = make_random_banded(grid, rng, top=2, scale=0.05)
        cutoffs = [16 * grid.frequency_step, 32 * grid.frequency_step]
        rep = almost_conservation_slope(u0, 0.5, cutoffs, t_end=0.01, dt=1e-3)
        assert rep.degenerate
        assert rep.drift_slope is None

    def test_amplitude_scaling_quartic(self):
        """Doubling the data roughly multiplies increments by 2^4."""
        L = 16 * np.pi
        grid = TorusGrid(L, 256)
        rng = np.random.default_rng(7)
        reports = []
        for amp in (0.15, 0.30):
            c = np.zeros(256, dtype=np.complex128)
            ms = np.arange(1, 81)
            c[ms] = amp * (1.0 + ms) ** -1.5 * np.exp(2j * np.pi * rng.uniform(size=80))
            c[-ms] = np.conj(c[ms])
            rng = np.random.default_rng(7)  # same phases for both amplitudes
            u0 = SpectralField(grid, c, mean_zero=True)
            reports.append(almost_conservation_slope(
                u0, 0.5, [16 / L], t_end=0.1, dt=2e-5, observer_stride=4))
        ratio = reports[1].quartic_integrals[0] / reports[0].quartic_integrals[0]
        assert 10.0 < ratio < 26.0
