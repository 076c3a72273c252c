"""Exception types shared across the package."""


class MkdvLabError(Exception):
    """Base class for all package errors."""


class DimensionError(MkdvLabError):
    """Array sizes or grids do not match."""


class InvariantError(MkdvLabError):
    """A structural invariant (Hermitian symmetry, mean-zero, ...) is violated."""


class ConfigurationError(MkdvLabError):
    """A parameter or config file is invalid."""


class BlowupError(MkdvLabError):
    """The solution left the representable range (NaN/overflow)."""

    def __init__(self, message: str, t_last: float):
        super().__init__(message)
        self.t_last = t_last


class InconclusiveError(MkdvLabError):
    """An experiment ran but its horizon was too short to decide."""
