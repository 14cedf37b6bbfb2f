"""Exception types shared across the package."""


class GainDoubletError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(GainDoubletError):
    """A configuration field failed validation. Carries the field name."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class NonUniformGrid(GainDoubletError):
    """Detuning grid spacing is not uniform."""


class GridTooNarrow(GainDoubletError):
    """Grid span too small relative to the spectral support; tails unreliable."""


class NonPositiveInput(GainDoubletError):
    """An input that must be positive was zero or negative."""


class InsufficientCoverage(GainDoubletError):
    """Profile does not cover the requested fit window."""


class InsufficientSamples(GainDoubletError):
    """Too few samples inside the fit window."""


class NoSignChange(GainDoubletError):
    """Group index does not change sign across the given bracket."""


class TooFewPoints(GainDoubletError):
    """Not enough measurement points for extrapolation."""


class NonMonotoneData(GainDoubletError):
    """1 - n_g is not strictly decreasing with pump separation."""


class Undersampled(GainDoubletError):
    """Sample rate too low for the requested signal content."""


class RateMismatch(GainDoubletError):
    """Signal and reference records have differing rates or beat frequencies."""


class FilterUnstable(GainDoubletError):
    """Filter cutoff too close to the Nyquist frequency."""


class TooShort(GainDoubletError):
    """Time series too short for spectral analysis."""


class DataFormatError(GainDoubletError):
    """Measurement CSV failed to parse or validate."""
