"""Experiment configuration and report models.

Configs are nested key-value documents (TOML on disk, JSON over the service
API). Unknown keys are rejected so a typo cannot silently change a run.
"""

from __future__ import annotations

import sys
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigurationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridSpec(StrictModel):
    period: float = 6.283185307179586
    n_modes: int = 256


class ModelSpec(StrictModel):
    gamma: float = 0.0
    sign: Literal[1, -1] = 1
    renormalized: bool = True
    lam: float = 1.0

    @field_validator("gamma")
    @classmethod
    def _gamma_nonneg(cls, v):
        if v < 0:
            raise ValueError("gamma must be nonnegative")
        return v


class ForcingMode(StrictModel):
    mode: int
    amplitude: float
    phase: float = 0.0

    @field_validator("mode")
    @classmethod
    def _nonzero(cls, v):
        if v == 0:
            raise ValueError("forcing must be mean-zero: mode 0 not allowed")
        return v


class ForcingSpec(StrictModel):
    modes: list[ForcingMode] = Field(default_factory=list)
    target_h1: Optional[float] = None


class InitialDataSpec(StrictModel):
    profile: Literal["zero", "cosine_mix", "soliton", "random"] = "cosine_mix"
    amplitude: float = 1.0
    seed: int = 0
    soliton_scale: float = 8.0
    decay: float = 1.5
    max_mode: Optional[int] = None
    target_hs: Optional[float] = None
    hs_order: float = 0.5


class RunSpec(StrictModel):
    t_end: float
    dt: float
    observer_stride: int = 10
    checkpoint_stride: int = 0   # 0: only initial and final checkpoints

    @field_validator("t_end", "dt")
    @classmethod
    def _positive(cls, v):
        if v <= 0:
            raise ValueError("must be positive")
        return v


class DiagnosticsSpec(StrictModel):
    s: float = 0.5
    smoothing_cutoff: Optional[float] = None   # default: quarter of the grid max
    with_increments: bool = False


class SimulateConfig(StrictModel):
    grid: GridSpec = GridSpec()
    model: ModelSpec = ModelSpec()
    forcing: ForcingSpec = ForcingSpec()
    initial: InitialDataSpec = InitialDataSpec()
    run: RunSpec
    diagnostics: DiagnosticsSpec = DiagnosticsSpec()
    resume_from: Optional[str] = None
    label: str = "simulate"


class DiagnoseConfig(StrictModel):
    run_dir: str
    s: float = 0.5
    smoothing_cutoff: Optional[float] = None
    with_increments: bool = True


class SlopeConfig(StrictModel):
    # defaults live on a stretched torus where the lattice-unit knees 8..64
    # have tame dispersion; see cutoff_unit
    grid: GridSpec = GridSpec(period=50.26548245743669, n_modes=512)
    initial: InitialDataSpec = InitialDataSpec(
        profile="random", amplitude=0.25, decay=1.5, max_mode=150, seed=42)
    cutoffs: list[float] = Field(default_factory=lambda: [8.0, 16.0, 32.0, 64.0])
    cutoff_unit: Literal["lattice", "physical"] = "lattice"
    s: float = 0.5
    t_end: float = 0.3
    dt: float = 1e-5
    observer_stride: int = 8
    label: str = "slope"


class SplitSpec(StrictModel):
    s: float = 0.95
    k2: Optional[float] = None   # None: surrogate from measured sup ||Iu||_H1^2
    t1: Optional[float] = None   # None: empirical absorption time
    variant: Literal["printed", "theorem"] = "theorem"
    radius_margin: float = 0.25

    @field_validator("s")
    @classmethod
    def _theorem_range(cls, v):
        if not (11.0 / 12.0 < v < 1.0):
            raise ValueError("splitting order s must satisfy 11/12 < s < 1")
        return v


class AttractorConfig(StrictModel):
    grid: GridSpec = GridSpec(n_modes=128)
    model: ModelSpec = ModelSpec(gamma=0.5, sign=-1)
    forcing: ForcingSpec = ForcingSpec(
        modes=[ForcingMode(mode=1, amplitude=1.0), ForcingMode(mode=2, amplitude=0.5)],
        target_h1=1.0,
    )
    initial: InitialDataSpec = InitialDataSpec(profile="random", target_hs=1.0,
                                               hs_order=0.95, decay=2.5)
    run: RunSpec = RunSpec(t_end=40.0, dt=1e-4, observer_stride=40)
    split: SplitSpec = SplitSpec()
    seeds: list[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5])
    workers: int = 4
    noise_floor: float = 1e-13
    label: str = "attractor"

    @field_validator("model")
    @classmethod
    def _damped(cls, v):
        if v.gamma <= 0:
            raise ValueError("attractor experiments need gamma > 0")
        return v


class TrilinearConfig(StrictModel):
    lam_values: list[float] = Field(default_factory=lambda: [1.0, 4.0, 16.0])
    k_max: float = 2.0
    dtau: float = 0.5
    s: float = 0.5
    ensemble: int = 64
    seed: int = 7
    preset: Literal["main", "low_low_high", "low_high_high", "high_high_high"] = "main"
    band_cutoff: Optional[float] = None
    refine_check: bool = True
    label: str = "trilinear"


class StrichartzConfig(StrictModel):
    lam: float = 1.0
    k_max: float = 2.0
    dtau: float = 0.5
    b: float = 0.4
    ensemble: int = 100
    seed: int = 11
    double_k_check: bool = True
    label: str = "strichartz"

    @field_validator("b")
    @classmethod
    def _b_range(cls, v):
        if v <= 1.0 / 3.0:
            raise ValueError("Strichartz experiments need b > 1/3")
        return v


class CounterexampleConfig(StrictModel):
    lam_values: list[float] = Field(default_factory=lambda: [4.0, 16.0, 64.0, 256.0])
    s: float = 0.5
    dtau: float = 0.25
    label: str = "counterexample"


EXPERIMENT_CONFIGS = {
    "simulate": SimulateConfig,
    "diagnose": DiagnoseConfig,
    "slope": SlopeConfig,
    "trilinear": TrilinearConfig,
    "strichartz": StrichartzConfig,
    "counterexample": CounterexampleConfig,
    "attractor": AttractorConfig,
}


def load_config(path, model_cls):
    """Parse a TOML config file into the given model, rejecting unknown keys."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"malformed config {path}: {exc}") from exc
    return validate_config(data, model_cls)


def validate_config(data: dict, model_cls):
    try:
        return model_cls.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(str(exc)) from exc


# ---------------------------------------------------------------------------
# report models (service responses)


class SimulateReport(StrictModel):
    status: Literal["ok", "blowup"] = "ok"
    run_dir: str
    t_final: float
    phase_final: float
    l2_final: float
    hs_final: float
    forcing_h1: float
    l2_bound_max_violation: float
    diagnostics_csv: str
    checkpoints: list[str]
    t_last_good: Optional[float] = None


class DiagnoseReport(StrictModel):
    run_dir: str
    diagnostics_csv: str
    n_records: int
    e_u_drift: float
    e_iu_drift: float


class SlopeExperimentReport(StrictModel):
    run_dir: str
    cutoffs: list[float]
    drifts: list[float]
    quartic_integrals: list[float]
    sextic_integrals: list[float]
    drift_slope: Optional[float]
    quartic_slope: Optional[float]
    sextic_slope: Optional[float]
    degenerate: bool
    csv_path: str


class RatioRecord(StrictModel):
    experiment: str
    lam: float
    s: float
    b: float
    preset: str
    ratio: float
    ensemble: int
    seed: int


class TrilinearReport(StrictModel):
    run_dir: str
    max_ratios: dict[str, float]          # keyed by str(lambda)
    refined_max_ratios: dict[str, float]  # empty when refine_check is off
    lambda_growth_slope: Optional[float]
    max_refinement_change: Optional[float]
    csv_path: str


class StrichartzReport(StrictModel):
    run_dir: str
    max_ratio: float
    max_ratio_halved_k: Optional[float]
    characteristic_ratio: float
    generic_median_ratio: float
    csv_path: str


class CounterexamplePointModel(StrictModel):
    lam: float
    resonance_product: float
    ratio_homogeneous: float
    ratio_inhomogeneous: float


class CounterexampleExperimentReport(StrictModel):
    run_dir: str
    s: float
    points: list[CounterexamplePointModel]
    slope_homogeneous: float
    slope_inhomogeneous: float
    csv_path: str


class SplitRecordModel(StrictModel):
    t: float
    cutoff: float
    h1_of_l1: float
    hs_of_l2: float


class SeedSummary(StrictModel):
    seed: int
    run_dir: str
    t1_empirical: Optional[float]
    sup_l1_h1: float
    l2_decay_rate: Optional[float]


class AttractorReport(StrictModel):
    status: Literal["ok", "inconclusive"] = "ok"
    run_dir: str
    seeds: list[SeedSummary]
    sup_l1_spread: Optional[float]      # (max-min)/mean over seeds
    min_l2_decay_rate: Optional[float]  # slowest fitted ||L2||_Hs decay rate
    k2_used: float
    t1_used: float
    split_csvs: list[str]
