"""Pseudospectral laboratory for the weakly damped, forced mKdV on the torus."""

__version__ = "0.1.0"

from .errors import (
    BlowupError,
    ConfigurationError,
    DimensionError,
    InconclusiveError,
    InvariantError,
    MkdvLabError,
)
from .torus import (
    SpectralField,
    TorusGrid,
    forward_transform,
    inverse_transform,
    norm,
    pointwise_cubic,
)
from .symbols import (
    Multiplier,
    apply_multiplier,
    band_filter,
    derivative,
    i_operator,
    miura_defect,
    miura_pair,
    rescale,
    rescaled_multiplier,
    split_low_high,
    trilinear_j,
)
from .integrator import (
    ModelParams,
    SimState,
    StepperConfig,
    evolve,
    initial_state,
    read_checkpoint,
    rhs,
    step,
    write_checkpoint,
)
from .diagnostics import (
    DiagnosticsCollector,
    DiagnosticsSeries,
    EnergyRecord,
    almost_conservation_slope,
    energy,
    increment_m,
    increment_terms,
    modified_energy,
)
from .bourgain import (
    SpaceTimeField,
    SpaceTimeLattice,
    XsbNormSpec,
    appendix_counterexample,
    leibniz_ratio,
    spacetime_j,
    strichartz_ratio,
    trilinear_ratio,
    xsb_norm,
)
