"""Dispersion-slope estimation and group-index nulling.

Maps fitted dispersion slopes to group indices via n_g = 1 + omega * slope,
solves the doublet model for the pump separation that nulls n_g, and
extrapolates the null from measured (pump separation, n_g) data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from .errors import (
    InsufficientCoverage,
    InsufficientSamples,
    NonMonotoneData,
    NoSignChange,
    TooFewPoints,
)
from .medium import DEFAULT_CARRIER, MediumParams, SpectralProfile


@dataclass(frozen=True)
class SlopeMeasurement:
    """A fitted dispersion slope at one pump separation.

    pump_separation: Hz
    slope: fitted dn/domega at the doublet center, rad^-1 s
    fit_bandwidth: width of the linear-fit window, Hz
    stderr: standard error of the fitted slope, rad^-1 s
    """

    pump_separation: float
    slope: float
    fit_bandwidth: float
    stderr: float

    def __post_init__(self):
        if self.fit_bandwidth <= 0:
            raise ValueError("fit_bandwidth must be > 0")
        if self.stderr < 0:
            raise ValueError("stderr must be >= 0")


@dataclass(frozen=True)
class NullEstimate:
    """Estimated pump separation at which n_g = 0."""

    delta_null: float
    method: str  # "model_root" or "data_extrapolation"
    interval: Tuple[float, float]

    def __post_init__(self):
        lo, hi = self.interval
        if not (lo <= self.delta_null <= hi):
            raise ValueError("interval must bracket delta_null")


MeasurementLike = Union[SlopeMeasurement, Tuple[float, float]]


def fit_linear_slope(
    profile: SpectralProfile,
    center: float,
    bandwidth: float,
    pump_separation: float = math.nan,
) -> SlopeMeasurement:
    """Ordinary least-squares slope of the index profile over a window.

    The fit is of index deviation against angular frequency (2*pi*detuning),
    over [center - bandwidth/2, center + bandwidth/2]. Requires the profile to
    cover the window with at least 8 samples.
    """
    lo, hi = center - bandwidth / 2.0, center + bandwidth / 2.0
    det = profile.detunings
    if det[0] > lo or det[-1] < hi:
        raise InsufficientCoverage(
            f"profile [{det[0]:.3g}, {det[-1]:.3g}] Hz does not cover "
            f"[{lo:.3g}, {hi:.3g}] Hz"
        )
    mask = (det >= lo) & (det <= hi)
    n = int(np.count_nonzero(mask))
    if n < 8:
        raise InsufficientSamples(f"only {n} samples in the fit window (need >= 8)")

    x = 2.0 * np.pi * det[mask]
    y = np.real(profile.values[mask])
    xm = x.mean()
    dx = x - xm
    sxx = float(np.dot(dx, dx))
    slope = float(np.dot(dx, y - y.mean()) / sxx)
    resid = y - (y.mean() + slope * dx)
    stderr = float(np.sqrt(np.dot(resid, resid) / ((n - 2) * sxx)))
    return SlopeMeasurement(pump_separation, slope, bandwidth, stderr)


def ng_from_slope(slope: float, carrier: float = DEFAULT_CARRIER) -> float:
    """Group index from a center dispersion slope: n_g = 1 + omega * slope."""
    return 1.0 + carrier * slope


def cad_threshold_slope(carrier: float = DEFAULT_CARRIER) -> float:
    """Dispersion slope at which the group index vanishes: -1/omega."""
    return -1.0 / carrier


def model_slope_at_center(params: MediumParams) -> float:
    """Closed-form dn/domega of the doublet model at the center.

    For lines at +-d/2: slope = M * (gamma^2 - d^2/4) / (d^2/4 + gamma^2)^2.
    """
    u = (np.pi * params.pump_separation) ** 2  # (d/2)^2
    g2 = params.half_width**2
    return float(params.line_amplitude * (g2 - u) / (u + g2) ** 2)


def model_group_index_at_center(params: MediumParams) -> float:
    return ng_from_slope(model_slope_at_center(params), params.carrier_angular_frequency)


def find_null_delta(
    params: MediumParams, bracket: Tuple[float, float]
) -> NullEstimate:
    """Pump separation nulling the model group index, by bisection.

    The bracket (Hz) must straddle exactly one sign change of n_g(Delta).
    """

    def f(delta: float) -> float:
        return model_group_index_at_center(replace(params, pump_separation=delta))

    lo, hi = float(bracket[0]), float(bracket[1])
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return NullEstimate(lo, "model_root", (lo, lo))
    if fhi == 0.0:
        return NullEstimate(hi, "model_root", (hi, hi))
    if flo * fhi > 0:
        raise NoSignChange(f"n_g({lo:.4g}) = {flo:.4g} and n_g({hi:.4g}) = {fhi:.4g}")

    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            break
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < 1e-6 and abs(fm) < 1e-6:
            break
    return NullEstimate(mid, "model_root", (lo, hi))


def _normalize_points(measurements: Iterable[MeasurementLike], carrier: float):
    pts = []
    for m in measurements:
        if isinstance(m, SlopeMeasurement):
            pts.append((float(m.pump_separation), ng_from_slope(m.slope, carrier)))
        else:
            delta, ng = m
            pts.append((float(delta), float(ng)))
    return sorted(pts)


def _fit_root(points, log_space: bool) -> float:
    """Root of a linear fit to (Delta, 1 - n_g) on the trailing 3 points.

    In log space the fit is of log(1 - n_g) vs Delta, solved at log(1-n_g)=0;
    otherwise 1 - n_g is fitted directly and solved at 1 - n_g = 1.
    """
    tail = points[-3:]
    d = np.array([p[0] for p in tail])
    y = np.array([1.0 - p[1] for p in tail])
    if log_space:
        b, a = np.polyfit(d, np.log(y), 1)
        return float(-a / b)
    b, a = np.polyfit(d, y, 1)
    return float((1.0 - a) / b)


def extrapolate_null(
    measurements: Sequence[MeasurementLike],
    method: str = "log_linear",
    carrier: float = DEFAULT_CARRIER,
) -> NullEstimate:
    """Extrapolate the n_g = 0 pump separation from measured data.

    Fits a monotone model to (Delta, 1 - n_g) on the trailing three points;
    the default fits log(1 - n_g) linearly in Delta, "linear" fits 1 - n_g
    itself. The reported interval spans the leave-one-out refits of the chosen
    form together with the alternative form's estimate: with a handful of
    points the choice of functional form dominates the uncertainty, so it is
    folded into the bracket rather than hidden.
    """
    if method not in ("log_linear", "linear"):
        raise ValueError(f"unknown extrapolation method {method!r}")
    points = _normalize_points(measurements, carrier)
    if len(points) < 3:
        raise TooFewPoints(f"need >= 3 measurements, got {len(points)}")
    deltas = [d for d, _ in points]
    if len(set(deltas)) != len(deltas):
        raise NonMonotoneData("pump separation values must be distinct")
    y = [1.0 - ng for _, ng in points]
    if any(b >= a for a, b in zip(y, y[1:])) or any(v <= 0 for v in y):
        raise NonMonotoneData("1 - n_g must be positive and strictly decreasing")

    log_space = method == "log_linear"
    estimate = _fit_root(points, log_space)
    candidates = [estimate, _fit_root(points, not log_space)]
    for i in range(len(points)):
        subset = points[:i] + points[i + 1 :]
        candidates.append(_fit_root(subset, log_space))
    return NullEstimate(
        estimate, "data_extrapolation", (min(candidates), max(candidates))
    )


def slope_controllability(measurements: Sequence[MeasurementLike]) -> float:
    """|slope| ratio between the smallest and largest pump separation.

    Accepts SlopeMeasurement objects or (pump_separation, slope) pairs and
    reports how far the dispersion slope was tuned across the sweep.
    """
    pts = []
    for m in measurements:
        if isinstance(m, SlopeMeasurement):
            pts.append((float(m.pump_separation), float(m.slope)))
        else:
            pts.append((float(m[0]), float(m[1])))
    if len(pts) < 2:
        raise TooFewPoints("need >= 2 measurements for a controllability ratio")
    pts.sort()
    return abs(pts[0][1] / pts[-1][1])
