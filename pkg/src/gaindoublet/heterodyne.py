"""Heterodyne phase-measurement chain.

Simulates the measurement used to read out the dispersion-induced phase
delta_phi = k * delta_n * L: a probe channel beating against a 40 MHz shifted
reference is mixed with the reference in two quadratures, low-pass filtered,
and the phase recovered from the I/Q pair. Sweeping the probe detuning across
the gain doublet reconstructs the index profile.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.signal import butter, filtfilt, hilbert

from .errors import FilterUnstable, RateMismatch, Undersampled
from .medium import MediumParams, SpectralProfile, gain_db, index_deviation

DEFAULT_BEAT_FREQUENCY = 40e6  # Hz, AOM offset of the reference wave
DEFAULT_SAMPLE_RATE = 400e6  # Hz, 10x beat oversampling
DEFAULT_LOWPASS_CUTOFF = 300e3  # Hz, demodulation bandwidth


@dataclass
class BeatRecord:
    """Sampled heterodyne beat channel."""

    samples: np.ndarray
    sample_rate: float
    beat_frequency: float = DEFAULT_BEAT_FREQUENCY

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.size == 0:
            raise ValueError("samples must be nonempty")
        if self.sample_rate <= 2.0 * self.beat_frequency:
            raise Undersampled(
                f"sample_rate {self.sample_rate:.3g} Hz must exceed twice the "
                f"beat frequency {self.beat_frequency:.3g} Hz"
            )


@dataclass(frozen=True)
class NoiseConfig:
    """Additive phase jitter and multiplicative intensity noise, seeded."""

    phase_jitter_rms: float = 0.0  # rad
    intensity_noise_rel: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.phase_jitter_rms < 0 or self.intensity_noise_rel < 0:
            raise ValueError("noise magnitudes must be >= 0")

    @property
    def active(self) -> bool:
        return self.phase_jitter_rms > 0 or self.intensity_noise_rel > 0


@dataclass(frozen=True)
class DemodConfig:
    """Demodulation chain settings."""

    lowpass_cutoff: float = DEFAULT_LOWPASS_CUTOFF
    filter_order: int = 1
    quadrature_bias: float = np.pi / 2
    noise: NoiseConfig = field(default_factory=NoiseConfig)

    def __post_init__(self):
        if self.lowpass_cutoff <= 0:
            raise ValueError("lowpass_cutoff must be > 0")
        if self.filter_order < 1:
            raise ValueError("filter_order must be >= 1")


def synthesize_beat(
    phase: float,
    gain_linear: float,
    duration: float,
    beat_frequency: float = DEFAULT_BEAT_FREQUENCY,
    sample_rate: float = DEFAULT_SAMPLE_RATE,
    noise: Optional[NoiseConfig] = None,
) -> BeatRecord:
    """Beat channel sqrt(gain) * cos(2*pi*f*t + phase) plus configured noise."""
    if gain_linear < 0:
        raise ValueError("gain_linear must be >= 0")
    if duration < 10.0 / beat_frequency:
        raise ValueError("duration must cover at least 10 beat periods")
    if sample_rate <= 2.0 * beat_frequency:
        raise Undersampled(
            f"sample_rate {sample_rate:.3g} Hz must exceed twice the beat "
            f"frequency {beat_frequency:.3g} Hz"
        )
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    ph = 2.0 * np.pi * beat_frequency * t + phase
    amp = np.sqrt(gain_linear)
    if noise is not None and noise.active:
        rng = np.random.default_rng(noise.seed)
        if noise.phase_jitter_rms > 0:
            ph = ph + rng.normal(0.0, noise.phase_jitter_rms, n)
        samples = amp * np.cos(ph)
        if noise.intensity_noise_rel > 0:
            samples = samples * (1.0 + rng.normal(0.0, noise.intensity_noise_rel, n))
    else:
        samples = amp * np.cos(ph)
    return BeatRecord(samples, sample_rate, beat_frequency)


def _lowpass(x: np.ndarray, cutoff: float, order: int, sample_rate: float):
    # forward-backward single/low-order Butterworth: zero phase delay offline;
    # Gustafsson edge handling, the default padding is far too short for a
    # cutoff this far below the sample rate
    b, a = butter(order, cutoff, fs=sample_rate)
    return filtfilt(b, a, x, method="gust")


def demodulate(
    signal: BeatRecord,
    reference: BeatRecord,
    cfg: DemodConfig,
    correct: bool = True,
) -> float:
    """Phase of the signal channel relative to the reference, in rad.

    The signal is mixed against the reference and against a copy shifted by
    the quadrature bias (obtained from the reference's analytic signal), both
    products are low-pass filtered, and the phase is recovered from the I/Q
    pair. With correct=False the small-angle estimate proportional to
    sin(delta_phi) is returned instead of the arcsine-corrected phase.
    """
    if (
        signal.sample_rate != reference.sample_rate
        or signal.beat_frequency != reference.beat_frequency
    ):
        raise RateMismatch("signal and reference rates/beat frequencies differ")
    fs = signal.sample_rate
    if cfg.lowpass_cutoff >= 0.45 * fs:
        raise FilterUnstable(
            f"cutoff {cfg.lowpass_cutoff:.3g} Hz too close to Nyquist {fs / 2:.3g} Hz"
        )

    n = min(signal.samples.size, reference.samples.size)
    sig = signal.samples[:n]
    ref = reference.samples[:n]
    analytic = hilbert(ref)
    ref_q = np.real(analytic * np.exp(-1j * cfg.quadrature_bias))

    fi = _lowpass(sig * ref, cfg.lowpass_cutoff, cfg.filter_order, fs)
    fq = _lowpass(sig * ref_q, cfg.lowpass_cutoff, cfg.filter_order, fs)

    # average the central region over an integer number of beat periods
    margin = n // 10
    span = n - 2 * margin
    per = fs / signal.beat_frequency
    ip = int(round(per))
    if ip >= 1 and abs(per - ip) < 1e-9 and span >= ip:
        span = (span // ip) * ip
    sel = slice(margin, margin + span)
    i_val = float(np.mean(fi[sel]))
    q_val = float(np.mean(fq[sel]))

    hyp = np.hypot(i_val, q_val)
    if hyp == 0.0:
        return 0.0
    if correct:
        return float(np.arctan2(-q_val, i_val))
    return float(-q_val / hyp)


def small_angle_ratio(delta_n: float, cell_length: float, wavenumber: float) -> float:
    """|k * delta_n * L|; below ~0.1 the small-angle demodulation is linear."""
    return abs(wavenumber * delta_n * cell_length)


def sweep_measure(
    params: MediumParams,
    sweep: Tuple[float, float, int],
    cfg: DemodConfig,
    beat_frequency: float = DEFAULT_BEAT_FREQUENCY,
    sample_rate: float = DEFAULT_SAMPLE_RATE,
    duration: float = 2.5e-6,
) -> SpectralProfile:
    """Reconstruct the index profile by simulating the full heterodyne chain.

    For each detuning the probe channel acquires phase k*delta_n*L and the
    medium's gain, is demodulated against a clean reference, and the phase is
    divided back by k*L. Noise, when configured, is applied per sweep point
    with a seed derived from the base seed.
    """
    start, stop, points = sweep
    half = params.pump_separation / 2.0
    if start > -half or stop < half:
        raise ValueError("sweep range must cover the gain doublet")
    detunings = np.linspace(start, stop, int(points))
    k_l = params.wavenumber * params.cell_length

    reference = synthesize_beat(0.0, 1.0, duration, beat_frequency, sample_rate)
    recon = np.empty_like(detunings)
    for i, det in enumerate(detunings):
        phase = k_l * float(index_deviation(params, det))
        g = 10.0 ** (float(gain_db(params, det)) / 10.0)
        noise = None
        if cfg.noise.active:
            noise = NoiseConfig(
                cfg.noise.phase_jitter_rms,
                cfg.noise.intensity_noise_rel,
                cfg.noise.seed + i,
            )
        sig = synthesize_beat(phase, g, duration, beat_frequency, sample_rate, noise)
        recon[i] = demodulate(sig, reference, cfg) / k_l
    return SpectralProfile(detunings, recon, "index_deviation")


def write_beat_csv(record: BeatRecord, path) -> None:
    """Export a beat record as (time_s, amplitude) CSV."""
    t = np.arange(record.samples.size) / record.sample_rate
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["time_s", "amplitude"])
        for ti, si in zip(t, record.samples):
            w.writerow([f"{ti:.9g}", f"{si:.9g}"])


def read_beat_csv(path, beat_frequency: float = DEFAULT_BEAT_FREQUENCY) -> BeatRecord:
    """Import a (time_s, amplitude) CSV; the sample rate comes from the time column."""
    times, amps = [], []
    with open(path, newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if [h.strip() for h in header] != ["time_s", "amplitude"]:
            raise ValueError("expected header time_s,amplitude")
        for row in r:
            times.append(float(row[0]))
            amps.append(float(row[1]))
    if len(times) < 2:
        raise ValueError("need at least 2 samples")
    rate = (len(times) - 1) / (times[-1] - times[0])
    return BeatRecord(np.array(amps), rate, beat_frequency)
