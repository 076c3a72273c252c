"""Stepper, evolution-law, and checkpoint tests."""

import numpy as np
import pytest

from mkdvlab.errors import BlowupError, ConfigurationError
from mkdvlab.integrator import (
    ModelParams,
    SimState,
    StepperConfig,
    evolve,
    initial_state,
    read_checkpoint,
    rhs,
    stability_dt_bound,
    step,
    write_checkpoint,
)
from mkdvlab.torus import SpectralField, TorusGrid, norm, pointwise_cubic
from mkdvlab.symbols import apply_multiplier, derivative, rescale
from mkdvlab.diagnostics import energy

from conftest import make_random_banded


def smooth_state(grid, gamma=0.0, sign=1, renormalized=True, forcing=None):
    u0 = SpectralField.from_modes(grid, {1: 0.5, 2: -0.25j})
    params = ModelParams(gamma=gamma, sign=sign, renormalized=renormalized)
    return initial_state(u0, params, forcing)


class TestRhs:
    def test_zero_state_zero_forcing(self):
        grid = TorusGrid(2 * np.pi, 32)
        st = initial_state(SpectralField.zeros(grid), ModelParams())
        assert np.all(rhs(st).coeffs == 0)

    def test_forcing_only(self):
        grid = TorusGrid(2 * np.pi, 32)
        f = SpectralField.from_modes(grid, {1: 0.3})
        st = initial_state(SpectralField.zeros(grid), ModelParams(), f)
        out = rhs(st)
        assert np.max(np.abs(out.coeffs - f.coeffs)) < 1e-15

    def test_single_mode_against_symbolic_oracle(self):
        grid = TorusGrid(2 * np.pi, 32)
        u = SpectralField.from_modes(grid, {1: 0.4})
        st = initial_state(u, ModelParams(renormalized=True))
        out = rhs(st)
        dx = 2j * np.pi * grid.frequencies
        ux = SpectralField(grid, dx * u.coeffs)
        cubic = pointwise_cubic(u, u, ux)
        mean_sq = float(np.sum(np.abs(u.coeffs) ** 2))
        expected = -(dx ** 3) * u.coeffs - 6.0 * (cubic.coeffs - mean_sq * dx * u.coeffs)
        expected[0] = 0.0
        assert np.max(np.abs(out.coeffs - expected)) < 1e-13


class TestStep:
    def test_linear_only_exact_phase(self):
        grid = TorusGrid(2 * np.pi, 64)
        st = initial_state(SpectralField.from_modes(grid, {3: 0.25}), ModelParams())
        out = step(st, StepperConfig(dt=0.01, nonlinear=False))
        k = grid.frequencies[3]
        expected = 0.25 * np.exp(8j * np.pi ** 3 * k ** 3 * 0.01)
        assert abs(out.field.amplitude(3) - expected) < 1e-14

    def test_exact_l2_damping_law(self, rng):
        grid = TorusGrid(2 * np.pi, 64)
        u0 = make_random_banded(grid, rng, scale=0.1, decay=1.5, top=12)
        st = initial_state(u0, ModelParams(gamma=0.5))
        fin = evolve(st, 2.0, StepperConfig(dt=2e-4))
        ratio = norm(fin.field, "l2") / norm(u0, "l2")
        assert abs(ratio - np.exp(-0.5 * 2.0)) < 1e-8

    def test_blowup_raises_with_last_time(self):
        grid = TorusGrid(2 * np.pi, 64)
        u0 = SpectralField.from_modes(grid, {1: 40.0, 2: 30.0})
        st = initial_state(u0, ModelParams())
        with pytest.raises(BlowupError) as err:
            evolve(st, 5.0, StepperConfig(dt=0.05))
        assert err.value.t_last >= 0.0

    def test_soliton_profile_resolution_convergence(self):
        """Sharp profile run against a finer-grid reference."""
        from mkdvlab.config import InitialDataSpec
        from mkdvlab.runner import build_initial_field

        spec = InitialDataSpec(profile="soliton", soliton_scale=8.0, amplitude=1.0)
        results = {}
        for n in (256, 512):
            grid = TorusGrid(2 * np.pi, n)
            u0 = build_initial_field(grid, spec)
            st = initial_state(u0, ModelParams(renormalized=False))
            fin = evolve(st, 0.02, StepperConfig(dt=5e-6))
            results[n] = fin.field
        coarse = results[256]
        ref = results[512]
        # compare on the coarse band
        idx = coarse.grid.mode_indices
        ref_on_coarse = np.array([ref.amplitude(int(m)) for m in idx])
        err = np.sqrt(np.sum(np.abs(coarse.coeffs - ref_on_coarse) ** 2) / coarse.grid.period)
        assert err < 1e-6


class TestEvolve:
    def test_no_steps_identity(self, rng):
        grid = TorusGrid(2 * np.pi, 32)
        st = smooth_state(grid)
        out = evolve(st, st.t, StepperConfig(dt=1e-3))
        assert out is st

    def test_energy_conservation_smooth_run(self):
        grid = TorusGrid(2 * np.pi, 64)
        st = smooth_state(grid)
        e0 = energy(st.field)
        fin = evolve(st, 1.0, StepperConfig(dt=2e-4))
        assert abs(energy(fin.field) - e0) / abs(e0) < 1e-7

    def test_semigroup_composition(self, rng):
        grid = TorusGrid(2 * np.pi, 32)
        u0 = make_random_banded(grid, rng, scale=0.2, decay=1.0)
        st = initial_state(u0, ModelParams(gamma=0.3))
        whole = evolve(st, 1.0, StepperConfig(dt=1e-3))
        half = evolve(evolve(st, 0.5, StepperConfig(dt=1e-3)), 1.0,
                      StepperConfig(dt=1e-3))
        assert np.max(np.abs(whole.field.coeffs - half.field.coeffs)) < 1e-12
        assert whole.phase == pytest.approx(half.phase, abs=1e-12)

    def test_partial_final_step(self):
        grid = TorusGrid(2 * np.pi, 32)
        st = smooth_state(grid)
        fin = evolve(st, 0.0105, StepperConfig(dt=1e-3))
        assert fin.t == 0.0105

    def test_observer_stride(self):
        grid = TorusGrid(2 * np.pi, 32)
        st = smooth_state(grid)
        seen = []
        evolve(st, 0.01, StepperConfig(dt=1e-3), observers=(lambda s: seen.append(s.t),),
               observer_stride=2)
        assert seen[0] == 0.0 and seen[-1] == 0.01
        assert len(seen) == 1 + 5  # initial + every 2nd of 10 steps (last merged)

    def test_backward_time_rejected(self):
        grid = TorusGrid(2 * np.pi, 32)
        st = smooth_state(grid)
        with pytest.raises(ConfigurationError):
            evolve(st, -1.0, StepperConfig(dt=1e-3))

    def test_renormalized_plain_magnitudes_agree(self, rng):
        """The two nonlinearity forms differ by a translation only."""
        grid = TorusGrid(2 * np.pi, 64)
        u0 = make_random_banded(grid, rng, scale=0.15, decay=1.5, top=10)
        fin_r = evolve(initial_state(u0, ModelParams(renormalized=True)), 0.5,
                       StepperConfig(dt=2e-4))
        fin_p = evolve(initial_state(u0, ModelParams(renormalized=False)), 0.5,
                       StepperConfig(dt=2e-4))
        assert np.max(np.abs(np.abs(fin_r.field.coeffs) - np.abs(fin_p.field.coeffs))) < 1e-8

    def test_rescaled_run_consistency(self, rng):
        """lambda-rescaled evolution matches rescaling the unrescaled run."""
        grid = TorusGrid(2 * np.pi, 64)
        u0 = make_random_banded(grid, rng, scale=0.15, decay=1.5, top=10)
        lam = 4.0
        t_end = 0.2
        fin_u = evolve(initial_state(u0, ModelParams(gamma=0.3)), t_end,
                       StepperConfig(dt=1e-4))
        v0 = rescale(u0, lam)
        fin_v = evolve(initial_state(v0, ModelParams(gamma=0.3, lam=lam)),
                       lam ** 3 * t_end, StepperConfig(dt=lam ** 3 * 1e-4))
        expected = rescale(fin_u.field, lam)
        assert np.max(np.abs(fin_v.field.coeffs - expected.coeffs)) < 1e-6

    def test_l2_balance_law_forced(self, rng):
        """d/dt ||u||^2 = -2 gamma ||u||^2 + 2 <u, F> integrates consistently."""
        from mkdvlab.torus import inner_product_l2
        from mkdvlab.integrator import _forcing_coeffs
        from mkdvlab.diagnostics import simpson_integral

        grid = TorusGrid(2 * np.pi, 64)
        u0 = make_random_banded(grid, rng, scale=0.1, decay=1.5, top=8)
        f = SpectralField.from_modes(grid, {1: 0.2, 3: 0.1})
        gamma = 0.4
        st = initial_state(u0, ModelParams(gamma=gamma), f)
        ts, l2s, pair = [], [], []

        def obs(s):
            ts.append(s.t)
            l2s.append(norm(s.field, "l2") ** 2)
            fc = _forcing_coeffs(s.forcing.coeffs, grid, s.phase, 1.0)
            ffield = SpectralField(grid, fc)
            pair.append(inner_product_l2(s.field, ffield))

        evolve(st, 1.0, StepperConfig(dt=1e-4), observers=(obs,), observer_stride=10)
        integrand = -2 * gamma * np.array(l2s) + 2 * np.array(pair)
        lhs = l2s[-1] - l2s[0]
        rhs_val = simpson_integral(integrand, ts[1] - ts[0])
        assert abs(lhs - rhs_val) < 1e-6

    def test_temporal_order_four(self, rng):
        grid = TorusGrid(2 * np.pi, 32)
        u0 = make_random_banded(grid, rng, scale=0.3, decay=1.5, top=6)
        params = ModelParams()
        ref = evolve(initial_state(u0, params), 0.5, StepperConfig(dt=3.125e-5))
        errs = []
        dts = [1e-3, 5e-4, 2.5e-4]
        for dt in dts:
            fin = evolve(initial_state(u0, params), 0.5, StepperConfig(dt=dt))
            errs.append(np.max(np.abs(fin.field.coeffs - ref.field.coeffs)))
        orders = [np.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
        assert all(abs(o - 4.0) <= 0.3 for o in orders)


class TestCheckpoints:
    def test_round_trip_bit_exact(self, tmp_path, rng):
        grid = TorusGrid(2 * np.pi, 64)
        u0 = make_random_banded(grid, rng)
        f = SpectralField.from_modes(grid, {1: 0.25})
        st = initial_state(u0, ModelParams(gamma=0.7, sign=-1, renormalized=False,
                                           lam=2.0), f, t=1.25, phase=0.5)
        path = tmp_path / "state.bin"
        write_checkpoint(st, path)
        back = read_checkpoint(path)
        assert back.t == st.t and back.phase == st.phase
        assert back.params == st.params
        assert np.array_equal(back.field.coeffs, st.field.coeffs)
        assert np.array_equal(back.forcing.coeffs, st.forcing.coeffs)

    def test_resume_reproduces_run(self, tmp_path, rng):
        grid = TorusGrid(2 * np.pi, 32)
        u0 = make_random_banded(grid, rng, scale=0.1, decay=1.0)
        f = SpectralField.from_modes(grid, {1: 0.2})
        st = initial_state(u0, ModelParams(gamma=0.5), f)
        cfg = StepperConfig(dt=1e-3)
        mid = evolve(st, 0.5, cfg)
        write_checkpoint(mid, tmp_path / "mid.bin")
        full = evolve(mid, 1.0, cfg)
        resumed = evolve(read_checkpoint(tmp_path / "mid.bin"), 1.0, cfg)
        assert np.array_equal(full.field.coeffs, resumed.field.coeffs)
        assert full.phase == resumed.phase

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"NOTACKPT" + b"\x00" * 64)
        with pytest.raises(ConfigurationError):
            read_checkpoint(path)


def test_stability_bound_positive(rng):
    grid = TorusGrid(2 * np.pi, 64)
    st = initial_state(make_random_banded(grid, rng), ModelParams())
    assert stability_dt_bound(st) > 0
