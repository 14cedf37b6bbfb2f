"""Rotation-sensing figures of merit for the doublet medium.

The scale-factor enhancement of a resonator gyro operated near the group
index null is represented by the mode-pulling proxy 1/|n_g|; the full
dispersive-cavity theory is deliberately out of scope and every report is
tagged with the proxy's name so the simplification stays visible.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

import numpy as np

from .medium import MediumParams, index_deviation
from .nulling import model_slope_at_center, ng_from_slope

ENHANCEMENT_MODEL_TAG = "mode-pulling proxy"
DEFAULT_EPSILON = 1e-6
DEFAULT_LINEARITY_THRESHOLD = 0.05


@dataclass(frozen=True)
class EnhancementReport:
    """Scale-factor enhancement at one operating point."""

    n_g: float
    enhancement: float
    diverged: bool
    linear_bandwidth: Optional[float] = None  # Hz
    note: Optional[str] = None
    model: str = ENHANCEMENT_MODEL_TAG


def scale_factor_enhancement(
    n_g: float, epsilon: float = DEFAULT_EPSILON
) -> EnhancementReport:
    """Enhancement 1/|n_g|, clamped via the divergence flag near the null.

    For |n_g| < epsilon the report is flagged diverged and the enhancement is
    capped at 1/epsilon so no non-finite value is ever emitted.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if abs(n_g) < epsilon:
        return EnhancementReport(n_g, 1.0 / epsilon, True)
    note = None
    if abs(n_g) > 1.0:
        note = "|n_g| > 1: enhancement below unity; operate nearer the null for gain"
    return EnhancementReport(n_g, 1.0 / abs(n_g), False, note=note)


def linear_bandwidth(
    params: MediumParams,
    threshold: float = DEFAULT_LINEARITY_THRESHOLD,
    points: int = 4000,
) -> float:
    """Widest window (full width, Hz) where the index profile stays linear.

    Linear means within `threshold` relative deviation from the center-tangent
    line. The scan extends out to the pump separation; a profile that never
    violates the threshold there reports the scan limit.
    """
    slope = model_slope_at_center(params)
    if slope == 0.0 or params.pump_separation == 0.0:
        return 0.0
    delta = np.linspace(
        params.pump_separation / points, params.pump_separation, points
    )
    tangent = slope * 2.0 * np.pi * delta
    rel = np.abs(index_deviation(params, delta) - tangent) / np.abs(tangent)
    above = np.nonzero(rel >= threshold)[0]
    if above.size == 0:
        return 2.0 * float(delta[-1])
    return 2.0 * float(delta[above[0]])


def enhancement_sweep(
    params: MediumParams,
    delta_range: Tuple[float, float],
    points: int,
    epsilon: float = DEFAULT_EPSILON,
    linearity_threshold: float = DEFAULT_LINEARITY_THRESHOLD,
) -> List[Tuple[float, EnhancementReport]]:
    """Enhancement and linear bandwidth over a pump-separation sweep.

    Returns (pump_separation, report) pairs on a uniform grid.
    """
    lo, hi = delta_range
    if lo <= 0 or hi <= lo:
        raise ValueError("delta_range must be positive and increasing")
    if points < 2:
        raise ValueError("points must be >= 2")
    out = []
    for delta in np.linspace(lo, hi, points):
        p = replace(params, pump_separation=float(delta))
        ng = ng_from_slope(model_slope_at_center(p), p.carrier_angular_frequency)
        report = scale_factor_enhancement(ng, epsilon)
        report = replace(report, linear_bandwidth=linear_bandwidth(p, linearity_threshold))
        out.append((float(delta), report))
    return out
