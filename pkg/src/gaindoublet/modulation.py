"""Temporal gain modulation from bi-frequency pumping.

The amplified probe beats against coherently scattered components offset by
integer multiples of the pump separation, so the detected intensity ripples
at those harmonics. Cascading two singly-pumped cells produces the same
doublet gain without any temporal modulation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal.windows import hann

from .errors import FilterUnstable, TooShort, Undersampled

MIN_SPECTRUM_SAMPLES = 1024
DB_FLOOR = -200.0


@dataclass
class FieldComponents:
    """Complex amplitudes a_m at frequency offsets m * Delta, m = 0..M_max."""

    amplitudes: np.ndarray
    pump_separation: float  # Hz
    cascade_mode: bool = False

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.ndim != 1 or self.amplitudes.size == 0:
            raise ValueError("amplitudes must be a nonempty 1-d array")
        if self.amplitudes[0] == 0:
            raise ValueError("a_0 (the amplified probe) must be nonzero")
        if not self.cascade_mode and self.amplitudes.size < 2:
            raise ValueError("need at least one harmonic unless in cascade mode")

    @property
    def max_harmonic(self) -> int:
        return self.amplitudes.size - 1


@dataclass(frozen=True)
class DetectorModel:
    """First-order low-pass photodetector response."""

    cutoff: float = 5e6  # Hz

    def __post_init__(self):
        if self.cutoff <= 0:
            raise ValueError("cutoff must be > 0")


def intensity_timeseries(
    fc: FieldComponents, duration: float, sample_rate: float
) -> np.ndarray:
    """Detected intensity |sum_m a_m exp(i*2*pi*m*Delta*t)|^2.

    In cascade mode the pump components never beat against each other and the
    output is the constant |a_0|^2.
    """
    if sample_rate <= 4.0 * fc.max_harmonic * fc.pump_separation:
        raise Undersampled(
            f"sample_rate {sample_rate:.3g} Hz too low for harmonic content up "
            f"to {fc.max_harmonic * fc.pump_separation:.3g} Hz"
        )
    n = int(round(duration * sample_rate))
    if fc.cascade_mode:
        return np.full(n, abs(fc.amplitudes[0]) ** 2)
    t = np.arange(n) / sample_rate
    field = np.zeros(n, dtype=complex)
    for m, a in enumerate(fc.amplitudes):
        field += a * np.exp(2j * np.pi * m * fc.pump_separation * t)
    return np.abs(field) ** 2


def modulation_depth(series: np.ndarray) -> float:
    """Peak-to-peak excursion of the intensity series."""
    return float(np.max(series) - np.min(series))


def power_spectrum_linear(series: np.ndarray, sample_rate: float):
    """Hann-windowed one-sided power spectrum, window-corrected.

    Normalized so the total spectral power equals the mean square of the
    series (exactly, for tones aligned to bins).
    """
    series = np.asarray(series, dtype=float)
    n = series.size
    if n < MIN_SPECTRUM_SAMPLES:
        raise TooShort(f"need >= {MIN_SPECTRUM_SAMPLES} samples, got {n}")
    w = hann(n, sym=False)
    spec = np.fft.rfft(series * w)
    power = np.abs(spec) ** 2
    power[1:] *= 2.0
    if n % 2 == 0:
        power[-1] /= 2.0
    power /= n * np.sum(w**2)
    freqs = np.fft.rfftfreq(n, d=1.0 / sample_rate)
    return freqs, power


def power_spectrum(series: np.ndarray, sample_rate: float):
    """One-sided power spectrum in dB (frequency Hz, power dB)."""
    freqs, power = power_spectrum_linear(series, sample_rate)
    peak = np.max(power)
    if peak <= 0:
        return freqs, np.full_like(power, DB_FLOOR)
    floor = peak * 10.0 ** (DB_FLOOR / 10.0)
    return freqs, 10.0 * np.log10(np.maximum(power, floor))


def detector_filter(
    series: np.ndarray, sample_rate: float, det: DetectorModel
) -> np.ndarray:
    """Apply the detector's first-order low-pass magnitude response.

    Applied in the frequency domain with zero phase, so the depth at
    frequency f scales by exactly 1/sqrt(1 + (f/cutoff)^2).
    """
    if det.cutoff >= sample_rate / 2.0:
        raise FilterUnstable(
            f"cutoff {det.cutoff:.3g} Hz at or above Nyquist {sample_rate / 2:.3g} Hz"
        )
    series = np.asarray(series, dtype=float)
    spec = np.fft.rfft(series)
    f = np.fft.rfftfreq(series.size, d=1.0 / sample_rate)
    spec /= np.sqrt(1.0 + (f / det.cutoff) ** 2)
    return np.fft.irfft(spec, n=series.size)


def geometric_ladder(a0: complex, ratio: float, max_harmonic: int) -> np.ndarray:
    """Default harmonic amplitudes a_m = a_0 * ratio^m."""
    return a0 * ratio ** np.arange(max_harmonic + 1, dtype=float)
