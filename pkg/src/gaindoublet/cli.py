"""Command-line front end.

Subcommands wire the simulation pipeline together: gain and dispersion
profiles, group-index null solving/extrapolation, modulation spectra, and the
enhancement sweep. Configuration is a flat key = value text file with units
suffixed in the key names; every emitted CSV starts with a comment header
recording the tool version, a hash of the resolved configuration, and the
method used. CSV is the authoritative output; SVG emission is a thin built-in
polyline plotter.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .errors import (
    ConfigError,
    DataFormatError,
    FilterUnstable,
    GridTooNarrow,
    NonMonotoneData,
    NonPositiveInput,
    NonUniformGrid,
    NoSignChange,
    RateMismatch,
    TooFewPoints,
    TooShort,
    Undersampled,
)
from .gyro import enhancement_sweep
from .heterodyne import DemodConfig, NoiseConfig, sweep_measure
from .medium import (
    DEFAULT_CARRIER,
    DEFAULT_CELL_LENGTH,
    MediumParams,
    calibrate_amplitude,
    sample_profile,
)
from .modulation import (
    DetectorModel,
    FieldComponents,
    detector_filter,
    geometric_ladder,
    intensity_timeseries,
    power_spectrum,
)
from .nulling import (
    SlopeMeasurement,
    extrapolate_null,
    find_null_delta,
    model_group_index_at_center,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_DATA = 4

_NUMERIC_ERRORS = (
    GridTooNarrow,
    NonUniformGrid,
    NonPositiveInput,
    NoSignChange,
    Undersampled,
    RateMismatch,
    FilterUnstable,
    TooShort,
)
_DATA_ERRORS = (DataFormatError, TooFewPoints, NonMonotoneData)

CONFIG_DEFAULTS = {
    "pump_separation_hz": 2e6,
    "gain_fwhm_hz": 700e3,
    "peak_gain_db": 3.5,
    "line_amplitude_rad_s": None,  # overrides the peak-gain calibration
    "cell_length_m": DEFAULT_CELL_LENGTH,
    "carrier_rad_s": DEFAULT_CARRIER,
    "sweep_start_hz": -4e6,
    "sweep_stop_hz": 4e6,
    "sweep_points": 201,
    "beat_frequency_hz": 40e6,
    "sample_rate_hz": 400e6,
    "duration_s": 2.5e-6,
    "lowpass_cutoff_hz": 300e3,
    "filter_order": 1,
    "quadrature_bias_rad": np.pi / 2,
    "phase_jitter_rms_rad": 0.0,
    "intensity_noise_rel": 0.0,
    "noise_repeats": 5,
    "detector_cutoff_hz": 5e6,
    "harmonic_count": 2,
    "harmonic_ratio": 0.2,
    "cascade": False,
    "mod_sample_rate_hz": 64e6,
    "mod_samples": 8192,
    "null_bracket_lo_hz": 1e5,
    "null_bracket_hi_hz": 1e9,
    "enh_start_hz": 1e6,
    "enh_stop_hz": 6e6,
    "enh_points": 101,
    "seed": 0,
}

_BOOL_KEYS = {"cascade"}
_INT_KEYS = {
    "sweep_points",
    "filter_order",
    "harmonic_count",
    "enh_points",
    "seed",
    "mod_samples",
    "noise_repeats",
}


@dataclass
class RunConfig:
    """Resolved configuration for one CLI invocation."""

    values: dict
    config_hash: str = ""

    def __post_init__(self):
        if not self.config_hash:
            canonical = "".join(
                f"{k}={self.values[k]!r}\n" for k in sorted(self.values)
            )
            self.config_hash = hashlib.sha256(canonical.encode()).hexdigest()[:12]

    def __getitem__(self, key):
        return self.values[key]

    def medium(self) -> MediumParams:
        v = self.values
        amp = v["line_amplitude_rad_s"]
        if amp is None:
            try:
                amp = calibrate_amplitude(
                    v["peak_gain_db"], v["gain_fwhm_hz"], v["cell_length_m"], v["carrier_rad_s"]
                )
            except NonPositiveInput as e:
                raise ConfigError("peak_gain_db", str(e)) from e
        try:
            return MediumParams(
                line_amplitude=amp,
                half_width=np.pi * v["gain_fwhm_hz"],
                pump_separation=v["pump_separation_hz"],
                cell_length=v["cell_length_m"],
                carrier_angular_frequency=v["carrier_rad_s"],
            )
        except ValueError as e:
            raise ConfigError("medium", str(e)) from e

    def demod(self, seed_override: Optional[int] = None) -> DemodConfig:
        v = self.values
        seed = v["seed"] if seed_override is None else seed_override
        try:
            return DemodConfig(
                lowpass_cutoff=v["lowpass_cutoff_hz"],
                filter_order=v["filter_order"],
                quadrature_bias=v["quadrature_bias_rad"],
                noise=NoiseConfig(
                    v["phase_jitter_rms_rad"], v["intensity_noise_rel"], seed
                ),
            )
        except ValueError as e:
            raise ConfigError("demod", str(e)) from e

    def sweep(self) -> Tuple[float, float, int]:
        v = self.values
        if v["sweep_points"] < 2:
            raise ConfigError("sweep_points", "must be >= 2")
        if v["sweep_stop_hz"] <= v["sweep_start_hz"]:
            raise ConfigError("sweep_stop_hz", "sweep range is empty")
        return (v["sweep_start_hz"], v["sweep_stop_hz"], v["sweep_points"])

    def detector(self) -> DetectorModel:
        try:
            return DetectorModel(self.values["detector_cutoff_hz"])
        except ValueError as e:
            raise ConfigError("detector_cutoff_hz", str(e)) from e


def parse_config_file(path: Path) -> dict:
    """Parse a flat key = value config file."""
    out = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in CONFIG_DEFAULTS:
            raise ConfigError(key, "unknown configuration key")
        try:
            if key in _BOOL_KEYS:
                if val.lower() in ("true", "1", "yes"):
                    out[key] = True
                elif val.lower() in ("false", "0", "no"):
                    out[key] = False
                else:
                    raise ValueError(f"not a boolean: {val!r}")
            elif key in _INT_KEYS:
                out[key] = int(val)
            else:
                out[key] = float(val)
                if not np.isfinite(out[key]):
                    raise ValueError("value must be finite")
        except ValueError as e:
            raise ConfigError(key, str(e)) from e
    return out


def load_config(path: Optional[str], seed: Optional[int]) -> RunConfig:
    values = dict(CONFIG_DEFAULTS)
    if path is not None:
        values.update(parse_config_file(Path(path)))
    if seed is not None:
        values["seed"] = seed
    return RunConfig(values)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    return format(float(x), ".9g")


def _write_csv(path: Path, cfg: RunConfig, method: str, header: Sequence[str], rows):
    with open(path, "w", newline="") as f:
        f.write(f"# tool: gaindoublet {__version__}\n")
        f.write(f"# config_hash: {cfg.config_hash}\n")
        f.write(f"# method: {method}\n")
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(c if isinstance(c, str) else _fmt(c) for c in row) + "\n")


def _write_svg(path: Path, x, y, title: str, xlabel: str, ylabel: str):
    """Minimal polyline plot; CSV remains the authoritative output."""
    width, height, pad = 640, 480, 60
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xr = np.ptp(x) or 1.0
    yr = np.ptp(y) or 1.0
    px = pad + (x - x.min()) / xr * (width - 2 * pad)
    py = height - pad - (y - y.min()) / yr * (height - 2 * pad)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    svg = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="24" text-anchor="middle" font-size="16">{title}</text>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.0f}" y="{height - 16}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="18" y="{height / 2:.0f}" font-size="12" transform="rotate(-90 18 {height / 2:.0f})" text-anchor="middle">{ylabel}</text>',
        f'<text x="{pad}" y="{height - pad + 16}" font-size="10" text-anchor="middle">{_fmt(x.min())}</text>',
        f'<text x="{width - pad}" y="{height - pad + 16}" font-size="10" text-anchor="middle">{_fmt(x.max())}</text>',
        f'<text x="{pad - 4}" y="{height - pad}" font-size="10" text-anchor="end">{_fmt(y.min())}</text>',
        f'<text x="{pad - 4}" y="{pad}" font-size="10" text-anchor="end">{_fmt(y.max())}</text>',
        f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="1.5"/>',
        "</svg>",
    ]
    path.write_text("\n".join(svg) + "\n")


def read_measurement_csv(path: Path) -> List:
    """Read measurement rows: (delta_pump_hz, n_g) pairs or slope 4-tuples."""
    lines = [
        ln for ln in path.read_text().splitlines() if ln.strip() and not ln.startswith("#")
    ]
    if not lines:
        raise DataFormatError("empty measurement file")
    header = [h.strip() for h in lines[0].split(",")]
    rows = []
    for ln in lines[1:]:
        cells = [c.strip() for c in ln.split(",")]
        if len(cells) != len(header):
            raise DataFormatError(f"row has {len(cells)} fields, header has {len(header)}")
        try:
            vals = [float(c) for c in cells]
        except ValueError as e:
            raise DataFormatError(f"non-numeric field in row {ln!r}") from e
        if not all(np.isfinite(v) for v in vals):
            raise DataFormatError(f"non-finite field in row {ln!r}")
        rows.append(vals)
    if not rows:
        raise DataFormatError("no data rows")
    deltas = [r[0] for r in rows]
    if len(set(deltas)) != len(deltas):
        raise DataFormatError("pump separation values must be distinct")

    if header == ["delta_pump_hz", "n_g"]:
        return [(r[0], r[1]) for r in rows]
    if header == ["delta_pump_hz", "slope_rad_inv_s", "fit_bandwidth_hz", "stderr"]:
        try:
            return [SlopeMeasurement(r[0], r[1], r[2], r[3]) for r in rows]
        except ValueError as e:
            raise DataFormatError(str(e)) from e
    raise DataFormatError(f"unrecognized measurement header {header!r}")


def _check_gain_grid(cfg: RunConfig, params: MediumParams):
    half_span = (cfg["sweep_stop_hz"] - cfg["sweep_start_hz"]) / 2.0
    fwhm = params.half_width / np.pi
    needed = params.pump_separation / 2.0 + 2.0 * fwhm
    if half_span < needed:
        raise GridTooNarrow(
            f"sweep half-span {half_span:.3g} Hz < doublet extent {needed:.3g} Hz"
        )


def cmd_gain(cfg: RunConfig, out: Path, svg: bool) -> int:
    params = cfg.medium()
    start, stop, points = cfg.sweep()
    _check_gain_grid(cfg, params)
    profile = sample_profile(params, start, stop, points, "gain_db")
    _write_csv(
        out / "gain_profile.csv",
        cfg,
        "doublet-model",
        ["delta_hz", "gain_db"],
        zip(profile.detunings, profile.values),
    )
    if svg:
        _write_svg(
            out / "gain_profile.svg",
            profile.detunings,
            profile.values,
            "Gain doublet",
            "detuning (Hz)",
            "gain (dB)",
        )
    return EXIT_OK


def cmd_dispersion(cfg: RunConfig, out: Path, svg: bool) -> int:
    params = cfg.medium()
    sweep = cfg.sweep()
    model = sample_profile(params, *sweep, "index_deviation")
    measured = sweep_measure(
        params,
        sweep,
        cfg.demod(),
        beat_frequency=cfg["beat_frequency_hz"],
        sample_rate=cfg["sample_rate_hz"],
        duration=cfg["duration_s"],
    )
    _write_csv(
        out / "dispersion.csv",
        cfg,
        "doublet-model + simulated-heterodyne",
        ["delta_hz", "delta_n_model", "delta_n_measured"],
        zip(model.detunings, model.values, measured.values),
    )
    noisy = cfg["phase_jitter_rms_rad"] > 0 or cfg["intensity_noise_rel"] > 0
    if noisy:
        repeats = [measured.values]
        for r in range(1, cfg["noise_repeats"]):
            rep = sweep_measure(
                params,
                sweep,
                cfg.demod(seed_override=cfg["seed"] + 1000 * r),
                beat_frequency=cfg["beat_frequency_hz"],
                sample_rate=cfg["sample_rate_hz"],
                duration=cfg["duration_s"],
            )
            repeats.append(rep.values)
        stack = np.vstack(repeats)
        _write_csv(
            out / "dispersion_stats.csv",
            cfg,
            f"seeded replication x{cfg['noise_repeats']}",
            ["delta_hz", "delta_n_mean", "delta_n_std"],
            zip(model.detunings, stack.mean(axis=0), stack.std(axis=0)),
        )
    if svg:
        _write_svg(
            out / "dispersion.svg",
            measured.detunings,
            measured.values,
            "Measured index deviation",
            "detuning (Hz)",
            "delta n",
        )
    return EXIT_OK


def cmd_null(cfg: RunConfig, out: Path, data: Optional[str]) -> int:
    if data is not None:
        measurements = read_measurement_csv(Path(data))
        estimate = extrapolate_null(measurements, carrier=cfg["carrier_rad_s"])
        method = "data_extrapolation (log-linear, trailing 3)"
    else:
        params = cfg.medium()
        lo, hi = cfg["null_bracket_lo_hz"], cfg["null_bracket_hi_hz"]
        # tighten the bracket to the last sign change in a dense scan
        grid = np.linspace(lo, hi, 400)
        vals = [
            model_group_index_at_center(
                MediumParams(
                    params.line_amplitude,
                    params.half_width,
                    float(d),
                    params.cell_length,
                    params.carrier_angular_frequency,
                )
            )
            for d in grid
        ]
        signs = np.sign(vals)
        flips = np.nonzero(np.diff(signs))[0]
        if flips.size == 0:
            raise NoSignChange("no group-index sign change inside the bracket")
        i = flips[-1]
        estimate = find_null_delta(params, (float(grid[i]), float(grid[i + 1])))
        method = "model_root (bisection)"
    _write_csv(
        out / "null_estimate.csv",
        cfg,
        method,
        ["delta_null_hz", "method", "interval_lo_hz", "interval_hi_hz"],
        [(estimate.delta_null, estimate.method, estimate.interval[0], estimate.interval[1])],
    )
    print(
        f"null pump separation: {_fmt(estimate.delta_null)} Hz "
        f"({estimate.method}, interval [{_fmt(estimate.interval[0])}, "
        f"{_fmt(estimate.interval[1])}] Hz)"
    )
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, out: Path, svg: bool) -> int:
    fc = FieldComponents(
        geometric_ladder(1.0, cfg["harmonic_ratio"], cfg["harmonic_count"]),
        cfg["pump_separation_hz"],
        cascade_mode=cfg["cascade"],
    )
    fs = cfg["mod_sample_rate_hz"]
    duration = cfg["mod_samples"] / fs
    series = intensity_timeseries(fc, duration, fs)
    series = detector_filter(series, fs, cfg.detector())
    t = np.arange(series.size) / fs
    method = "harmonic-ladder" + (" (cascade)" if cfg["cascade"] else "")
    method += "; depth amplitudes illustrative, not calibrated"
    _write_csv(
        out / "modulation_timeseries.csv",
        cfg,
        method,
        ["time_s", "intensity"],
        zip(t, series),
    )
    freqs, power_db = power_spectrum(series, fs)
    _write_csv(
        out / "modulation_spectrum.csv",
        cfg,
        method + "; Hann-windowed DFT",
        ["frequency_hz", "power_db"],
        zip(freqs, power_db),
    )
    if svg:
        _write_svg(
            out / "modulation_spectrum.svg",
            freqs,
            power_db,
            "Modulation power spectrum",
            "frequency (Hz)",
            "power (dB)",
        )
    return EXIT_OK


def cmd_sweep_enhancement(cfg: RunConfig, out: Path, svg: bool) -> int:
    params = cfg.medium()
    if cfg["enh_points"] < 2:
        raise ConfigError("enh_points", "must be >= 2")
    try:
        sweep = enhancement_sweep(
            params, (cfg["enh_start_hz"], cfg["enh_stop_hz"]), cfg["enh_points"]
        )
    except ValueError as e:
        raise ConfigError("enh_start_hz", str(e)) from e
    _write_csv(
        out / "enhancement_sweep.csv",
        cfg,
        "mode-pulling proxy 1/|n_g|",
        ["delta_hz", "n_g", "enhancement", "diverged", "linear_bw_hz"],
        (
            (d, r.n_g, r.enhancement, r.diverged, r.linear_bandwidth)
            for d, r in sweep
        ),
    )
    if svg:
        _write_svg(
            out / "enhancement_sweep.svg",
            [d for d, _ in sweep],
            [r.enhancement for _, r in sweep],
            "Scale-factor enhancement (mode-pulling proxy)",
            "pump separation (Hz)",
            "enhancement",
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaindoublet",
        description="Gain-doublet dispersion simulator and analysis toolkit",
    )
    parser.add_argument("--config", metavar="PATH", help="flat key = value config file")
    parser.add_argument("--out", metavar="DIR", default=".", help="output directory")
    parser.add_argument("--seed", type=int, metavar="N", help="override the RNG seed")
    parser.add_argument("--svg", action="store_true", help="also emit SVG plots")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gain", help="gain-doublet profile CSV")
    sub.add_parser("dispersion", help="index profile: model vs simulated heterodyne")
    null_p = sub.add_parser("null", help="group-index null estimate")
    null_p.add_argument("--data", metavar="PATH", help="measurement CSV to extrapolate")
    sub.add_parser("spectrum", help="gain-modulation time series and power spectrum")
    sub.add_parser("sweep-enhancement", help="enhancement vs pump separation")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.seed)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "gain":
            return cmd_gain(cfg, out, args.svg)
        if args.command == "dispersion":
            return cmd_dispersion(cfg, out, args.svg)
        if args.command == "null":
            return cmd_null(cfg, out, args.data)
        if args.command == "spectrum":
            return cmd_spectrum(cfg, out, args.svg)
        if args.command == "sweep-enhancement":
            return cmd_sweep_enhancement(cfg, out, args.svg)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERIC_ERRORS as e:
        print(f"numeric-domain error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except _DATA_ERRORS as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
