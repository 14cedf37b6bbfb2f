"""Two-line Lorentzian gain-doublet model of a Raman-amplified vapor cell.

The medium is described by two mirrored Lorentzian gain lines of equal
amplitude and width, separated by the pump difference frequency. The complex
response is

    chi(x) = M * [1/(x - d/2 + i*gamma) + 1/(x + d/2 + i*gamma)]

with x the angular two-photon detuning and d the angular pump separation.
Im chi < 0 corresponds to gain; the index deviation is Re chi / 2 on a
near-unity background, and intensity gain over a cell of length L is
exp(-k * Im chi * L).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.signal import hilbert

from .errors import GridTooNarrow, NonPositiveInput, NonUniformGrid

C_LIGHT = 299_792_458.0  # m/s

# 780.24 nm probe carrier (Rb D2 line)
DEFAULT_CARRIER = 2.4141e15  # rad/s
DEFAULT_CELL_LENGTH = 0.1  # m

# Minimum ratio of grid half-span to the measured spectral support (half-max
# extent of |Im chi|) accepted by the Kramers-Kronig transform. Narrower grids
# are rejected rather than silently extrapolating the tails.
KK_MIN_SPAN_FACTOR = 20.0

PROFILE_KINDS = ("susceptibility", "index_deviation", "gain_db")

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class MediumParams:
    """Parameters of the two-line gain model.

    line_amplitude: amplitude M of each line, rad/s
    half_width: Lorentzian HWHM gamma, rad/s (gamma = pi * FWHM_Hz)
    pump_separation: separation of the two lines, Hz
    cell_length: vapor cell length, m
    carrier_angular_frequency: probe carrier, rad/s
    """

    line_amplitude: float
    half_width: float
    pump_separation: float
    cell_length: float = DEFAULT_CELL_LENGTH
    carrier_angular_frequency: float = DEFAULT_CARRIER

    def __post_init__(self):
        if self.line_amplitude < 0:
            raise ValueError("line_amplitude must be >= 0 (gain medium)")
        if self.half_width <= 0:
            raise ValueError("half_width must be > 0")
        if self.pump_separation < 0:
            raise ValueError("pump_separation must be >= 0")
        if self.cell_length <= 0:
            raise ValueError("cell_length must be > 0")
        if self.carrier_angular_frequency <= 0:
            raise ValueError("carrier_angular_frequency must be > 0")

    @property
    def wavenumber(self) -> float:
        """Probe wavenumber k = omega / c, rad/m."""
        return self.carrier_angular_frequency / C_LIGHT


@dataclass
class SpectralProfile:
    """Sampled spectral response on a strictly increasing detuning grid.

    detunings: two-photon detunings relative to the doublet center, Hz
    values: complex susceptibility samples, or real index/gain samples
    kind: one of "susceptibility", "index_deviation", "gain_db"
    """

    detunings: np.ndarray
    values: np.ndarray
    kind: str

    def __post_init__(self):
        self.detunings = np.asarray(self.detunings, dtype=float)
        self.values = np.asarray(self.values)
        if self.kind not in PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.detunings.ndim != 1 or self.detunings.size < 2:
            raise ValueError("need at least 2 detuning samples")
        if self.values.shape != self.detunings.shape:
            raise ValueError("values and detunings must have the same length")
        if np.any(np.diff(self.detunings) <= 0):
            raise ValueError("detunings must be strictly increasing")

    @property
    def spacing(self) -> float:
        return float(self.detunings[1] - self.detunings[0])


def susceptibility(params: MediumParams, detuning: ArrayLike):
    """Complex response chi at a two-photon detuning (Hz). Vectorized."""
    x = 2.0 * np.pi * np.asarray(detuning, dtype=float)
    a = np.pi * params.pump_separation  # d/2
    g = params.half_width
    chi = params.line_amplitude * (1.0 / (x - a + 1j * g) + 1.0 / (x + a + 1j * g))
    if np.isscalar(detuning) or np.ndim(detuning) == 0:
        return complex(chi)
    return chi


def gain_db(params: MediumParams, detuning: ArrayLike):
    """Single-pass intensity gain in dB: 10*log10(exp(-k * Im chi * L))."""
    im = np.imag(susceptibility(params, detuning))
    out = -(10.0 / np.log(10.0)) * params.wavenumber * params.cell_length * im
    return out


def index_deviation(params: MediumParams, detuning: ArrayLike):
    """Refractive-index deviation from the unity background, Re chi / 2."""
    return np.real(susceptibility(params, detuning)) / 2.0


def index_slope(params: MediumParams, detuning: ArrayLike):
    """Analytic dn/domega at a detuning (Hz), in rad^-1 s."""
    x = 2.0 * np.pi * np.asarray(detuning, dtype=float)
    a = np.pi * params.pump_separation
    g2 = params.half_width**2
    m = params.line_amplitude / 2.0
    out = m * (
        (g2 - (x - a) ** 2) / ((x - a) ** 2 + g2) ** 2
        + (g2 - (x + a) ** 2) / ((x + a) ** 2 + g2) ** 2
    )
    return out


def group_index(params: MediumParams, detuning: ArrayLike):
    """Group index n_g = 1 + omega * dn/domega on the unity background."""
    return 1.0 + params.carrier_angular_frequency * index_slope(params, detuning)


def sample_profile(
    params: MediumParams, start: float, stop: float, points: int, kind: str
) -> SpectralProfile:
    """Evaluate the model on a uniform detuning grid [start, stop] (Hz)."""
    detunings = np.linspace(start, stop, points)
    if kind == "susceptibility":
        values = susceptibility(params, detunings)
    elif kind == "index_deviation":
        values = index_deviation(params, detunings)
    elif kind == "gain_db":
        values = gain_db(params, detunings)
    else:
        raise ValueError(f"unknown profile kind {kind!r}")
    return SpectralProfile(detunings, values, kind)


def kramers_kronig(gain_profile: SpectralProfile) -> SpectralProfile:
    """Index profile from a sampled gain profile via a numerical Hilbert transform.

    The input must be a "susceptibility" profile on a uniform grid; complex
    values use their imaginary part, real values are taken to be Im chi
    directly. Re chi is obtained with the FFT-based discrete Hilbert transform
    (scipy.signal.hilbert with 16x zero padding to suppress wrap-around), and
    the returned profile holds Re chi / 2 on the same grid.
    """
    if gain_profile.kind != "susceptibility":
        raise ValueError("kramers_kronig expects a susceptibility profile")
    det = gain_profile.detunings
    steps = np.diff(det)
    if np.max(np.abs(steps - steps[0])) > 1e-9 * abs(steps[0]):
        raise NonUniformGrid("detuning grid must be uniformly spaced")

    im = np.asarray(gain_profile.values)
    if np.iscomplexobj(im):
        im = im.imag
    im = im.astype(float)

    peak = np.max(np.abs(im))
    if peak > 0:
        support = np.max(np.abs(det[np.abs(im) >= 0.5 * peak]))
        half_span = (det[-1] - det[0]) / 2.0
        if support > 0 and half_span < KK_MIN_SPAN_FACTOR * support:
            raise GridTooNarrow(
                f"grid half-span {half_span:.3g} Hz < "
                f"{KK_MIN_SPAN_FACTOR:g} x spectral support {support:.3g} Hz"
            )

    n = im.size
    nfft = 16 * (1 << int(np.ceil(np.log2(n))))
    re = -hilbert(im, N=nfft).imag[:n]
    return SpectralProfile(det.copy(), re / 2.0, "index_deviation")


def calibrate_amplitude(
    peak_gain_db: float,
    fwhm: float,
    cell_length: float = DEFAULT_CELL_LENGTH,
    carrier: float = DEFAULT_CARRIER,
) -> float:
    """Line amplitude M that yields a given peak gain for one isolated line.

    Inverts G_peak = exp(k*M*L/gamma): M = ln(10^(dB/10)) * gamma / (k*L).
    Valid when the two lines are well separated (2*pi*Delta >> gamma).
    """
    if peak_gain_db < 0:
        raise NonPositiveInput("peak_gain_db must be >= 0")
    if fwhm <= 0 or cell_length <= 0 or carrier <= 0:
        raise NonPositiveInput("fwhm, cell_length and carrier must be > 0")
    gamma = np.pi * fwhm
    k = carrier / C_LIGHT
    return float(np.log(10.0 ** (peak_gain_db / 10.0)) * gamma / (k * cell_length))
