"""Gain-doublet anomalous dispersion toolkit.

Models a bi-frequency pumped gain medium as a two-line Lorentzian doublet,
simulates the heterodyne phase measurement of its dispersion, and solves or
extrapolates for the pump separation that nulls the group index.
"""

__version__ = "0.1.0"

from .medium import (  # noqa: F401
    MediumParams,
    SpectralProfile,
    calibrate_amplitude,
    gain_db,
    group_index,
    index_deviation,
    index_slope,
    kramers_kronig,
    sample_profile,
    susceptibility,
)
from .nulling import (  # noqa: F401
    NullEstimate,
    SlopeMeasurement,
    cad_threshold_slope,
    extrapolate_null,
    find_null_delta,
    fit_linear_slope,
    model_slope_at_center,
    ng_from_slope,
    slope_controllability,
)
from .heterodyne import (  # noqa: F401
    BeatRecord,
    DemodConfig,
    NoiseConfig,
    demodulate,
    small_angle_ratio,
    sweep_measure,
    synthesize_beat,
)
from .modulation import (  # noqa: F401
    DetectorModel,
    FieldComponents,
    detector_filter,
    geometric_ladder,
    intensity_timeseries,
    modulation_depth,
    power_spectrum,
    power_spectrum_linear,
)
from .gyro import (  # noqa: F401
    EnhancementReport,
    enhancement_sweep,
    scale_factor_enhancement,
)
