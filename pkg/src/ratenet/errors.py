"""Exception hierarchy shared across the package."""


class RateNetError(Exception):
    """Base class for all errors raised by this package."""


class LoadError(RateNetError):
    """A panel file could not be parsed."""


class EmptyPanelError(RateNetError):
    """Cleaning or slicing left no usable series."""


class DegenerateSeriesError(RateNetError):
    """A series is constant (or otherwise has zero variance)."""


class DegreesOfFreedomError(RateNetError):
    """Not enough observations to estimate the requested model."""


class CollinearityError(RateNetError):
    """The regressor matrix is singular."""


class UnstableModelError(RateNetError):
    """A VAR model has companion spectral radius at or above one."""


class SpectralSingularityError(RateNetError):
    """The transfer-function matrix is numerically singular at some frequency."""


class NumericalConsistencyError(RateNetError):
    """An internal quantity violated a sign or magnitude constraint beyond tolerance."""
