import numpy as np
import pytest

from gaindoublet import MediumParams, calibrate_amplitude

# Group-index measurements at four pump separations: (Delta Hz, slope, n_g)
MEASURED_SLOPES = [
    (2.0e6, -1.08e-12, -2608.0),
    (2.5e6, -1.4e-13, -337.3),
    (3.0e6, -8.05e-14, -193.5),
    (4.0e6, -4.0e-15, -8.66),
]

GAMMA_700K = np.pi * 700e3  # rad/s HWHM for a 700 kHz FWHM line


@pytest.fixture
def calibrated_params():
    """3.5 dB peak gain doublet at 2 MHz separation, 700 kHz linewidth."""
    m = calibrate_amplitude(3.5, 700e3)
    return MediumParams(m, GAMMA_700K, 2e6)


@pytest.fixture
def null_demo_params():
    """Amplitude chosen so the model group-index null sits near 3.9 MHz."""
    return MediumParams(0.0687, GAMMA_700K, 2e6)
