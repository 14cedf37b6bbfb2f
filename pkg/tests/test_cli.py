import numpy as np
import pytest

from gaindoublet.cli import main

from conftest import MEASURED_SLOPES


def _write_config(tmp_path, **overrides):
    lines = [f"{k} = {v}" for k, v in overrides.items()]
    path = tmp_path / "run.cfg"
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def _read_csv(path):
    rows = []
    header = None
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append(line.split(","))
    return header, rows


def _numeric(rows, col):
    return np.array([float(r[col]) for r in rows])


def test_gain_peak_separation(tmp_path):
    out = tmp_path / "out"
    assert main(["--out", str(out), "gain"]) == 0
    header, rows = _read_csv(out / "gain_profile.csv")
    assert header == ["delta_hz", "gain_db"]
    det = _numeric(rows, 0)
    g = _numeric(rows, 1)
    pos = det > 0
    neg = det < 0
    sep = det[pos][np.argmax(g[pos])] - det[neg][np.argmax(g[neg])]
    step = det[1] - det[0]
    assert abs(sep - 2e6) <= step


def test_gain_flat_for_empty_medium(tmp_path):
    cfg = _write_config(tmp_path, line_amplitude_rad_s=0.0)
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "gain"]) == 0
    _, rows = _read_csv(out / "gain_profile.csv")
    assert np.all(_numeric(rows, 1) == 0.0)


def test_gain_narrow_grid_exit_3(tmp_path):
    cfg = _write_config(tmp_path, sweep_start_hz=-1e6, sweep_stop_hz=1e6)
    assert main(["--config", cfg, "--out", str(tmp_path / "o"), "gain"]) == 3


def test_gain_svg_emitted(tmp_path):
    out = tmp_path / "out"
    assert main(["--out", str(out), "--svg", "gain"]) == 0
    svg = (out / "gain_profile.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_csv_headers_record_provenance(tmp_path):
    out = tmp_path / "out"
    assert main(["--out", str(out), "gain"]) == 0
    text = (out / "gain_profile.csv").read_text().splitlines()
    assert text[0].startswith("# tool: gaindoublet ")
    assert text[1].startswith("# config_hash: ")
    assert text[2].startswith("# method: ")


def test_unknown_config_key_exit_2(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("frobnication_hz = 12\n")
    assert main(["--config", str(cfg), "--out", str(tmp_path / "o"), "gain"]) == 2


def test_bad_config_value_exit_2(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("pump_separation_hz = banana\n")
    assert main(["--config", str(cfg), "--out", str(tmp_path / "o"), "gain"]) == 2


def test_dispersion_columns_agree(tmp_path):
    cfg = _write_config(tmp_path, sweep_points=41, peak_gain_db=1.0)
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "dispersion"]) == 0
    _, rows = _read_csv(out / "dispersion.csv")
    model = _numeric(rows, 1)
    measured = _numeric(rows, 2)
    rms = np.sqrt(np.mean((model - measured) ** 2) / np.mean(model**2))
    assert rms < 0.02
    assert not (out / "dispersion_stats.csv").exists()


def test_dispersion_noise_writes_stats(tmp_path):
    cfg = _write_config(
        tmp_path, sweep_points=15, phase_jitter_rms_rad=0.05, noise_repeats=3
    )
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "dispersion"]) == 0
    header, rows = _read_csv(out / "dispersion_stats.csv")
    assert header == ["delta_hz", "delta_n_mean", "delta_n_std"]
    assert np.any(_numeric(rows, 2) > 0)


def test_dispersion_empty_sweep_exit_2(tmp_path):
    cfg = _write_config(tmp_path, sweep_start_hz=1e6, sweep_stop_hz=1e6)
    assert main(["--config", cfg, "--out", str(tmp_path / "o"), "dispersion"]) == 2


def test_null_from_measurement_csv(tmp_path):
    data = tmp_path / "meas.csv"
    data.write_text(
        "delta_pump_hz,n_g\n"
        + "\n".join(f"{d},{ng}" for d, _, ng in MEASURED_SLOPES)
        + "\n"
    )
    out = tmp_path / "out"
    assert main(["--out", str(out), "null", "--data", str(data)]) == 0
    _, rows = _read_csv(out / "null_estimate.csv")
    delta_null = float(rows[0][0])
    assert 4.0e6 <= delta_null <= 5.0e6
    assert rows[0][1] == "data_extrapolation"
    assert float(rows[0][2]) <= 4.1e6 <= float(rows[0][3])


def test_null_from_slope_schema_csv(tmp_path):
    data = tmp_path / "meas.csv"
    data.write_text(
        "delta_pump_hz,slope_rad_inv_s,fit_bandwidth_hz,stderr\n"
        + "\n".join(f"{d},{s},0.5e6,0" for d, s, _ in MEASURED_SLOPES)
        + "\n"
    )
    out = tmp_path / "out"
    assert main(["--out", str(out), "null", "--data", str(data)]) == 0
    _, rows = _read_csv(out / "null_estimate.csv")
    assert 4.0e6 <= float(rows[0][0]) <= 5.0e6


def test_null_too_few_rows_exit_4(tmp_path):
    data = tmp_path / "meas.csv"
    data.write_text("delta_pump_hz,n_g\n2e6,-2608\n2.5e6,-337.3\n")
    assert main(["--out", str(tmp_path / "o"), "null", "--data", str(data)]) == 4


def test_null_bad_header_exit_4(tmp_path):
    data = tmp_path / "meas.csv"
    data.write_text("delta,ng\n2e6,-2608\n")
    assert main(["--out", str(tmp_path / "o"), "null", "--data", str(data)]) == 4


def test_null_model_path(tmp_path):
    cfg = _write_config(
        tmp_path,
        line_amplitude_rad_s=0.0687,
        null_bracket_lo_hz=1e6,
        null_bracket_hi_hz=10e6,
    )
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "null"]) == 0
    _, rows = _read_csv(out / "null_estimate.csv")
    assert float(rows[0][0]) == pytest.approx(3.9076e6, rel=0.01)
    assert rows[0][1] == "model_root"


def test_null_model_no_sign_change_exit_3(tmp_path):
    cfg = _write_config(tmp_path, line_amplitude_rad_s=0.0)
    assert main(["--config", cfg, "--out", str(tmp_path / "o"), "null"]) == 3


def test_spectrum_peaks(tmp_path):
    out = tmp_path / "out"
    assert main(["--out", str(out), "spectrum"]) == 0
    _, rows = _read_csv(out / "modulation_spectrum.csv")
    freqs = _numeric(rows, 0)
    pdb = _numeric(rows, 1)
    binw = freqs[1] - freqs[0]
    for m in (1, 2):
        k = int(round(m * 2e6 / binw))
        assert pdb[k] > np.max(pdb) - 80.0


def test_spectrum_cascade_dc_only(tmp_path):
    cfg = _write_config(tmp_path, cascade="true")
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "spectrum"]) == 0
    _, rows = _read_csv(out / "modulation_timeseries.csv")
    intensity = _numeric(rows, 1)
    assert np.max(intensity) - np.min(intensity) < 1e-9
    _, rows = _read_csv(out / "modulation_spectrum.csv")
    pdb = _numeric(rows, 1)
    assert np.argmax(pdb) == 0


def test_spectrum_undersampled_exit_3(tmp_path):
    cfg = _write_config(tmp_path, mod_sample_rate_hz=10e6)
    assert main(["--config", cfg, "--out", str(tmp_path / "o"), "spectrum"]) == 3


def test_sweep_enhancement_output(tmp_path):
    cfg = _write_config(
        tmp_path, line_amplitude_rad_s=0.0687, enh_start_hz=3e6, enh_stop_hz=5e6
    )
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out), "sweep-enhancement"]) == 0
    header, rows = _read_csv(out / "enhancement_sweep.csv")
    assert header == ["delta_hz", "n_g", "enhancement", "diverged", "linear_bw_hz"]
    deltas = _numeric(rows, 0)
    enh = _numeric(rows, 2)
    assert deltas[np.argmax(enh)] == pytest.approx(3.9076e6, rel=0.02)


def test_deterministic_outputs(tmp_path):
    cfg = _write_config(tmp_path, sweep_points=15, phase_jitter_rms_rad=0.05)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out in (out_a, out_b):
        assert main(["--config", cfg, "--out", str(out), "--seed", "7", "dispersion"]) == 0
    assert (out_a / "dispersion.csv").read_bytes() == (out_b / "dispersion.csv").read_bytes()
    assert (
        out_a / "dispersion_stats.csv"
    ).read_bytes() == (out_b / "dispersion_stats.csv").read_bytes()


def test_seed_changes_noisy_output(tmp_path):
    cfg = _write_config(tmp_path, sweep_points=15, phase_jitter_rms_rad=0.05)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["--config", cfg, "--out", str(out_a), "--seed", "7", "dispersion"]) == 0
    assert main(["--config", cfg, "--out", str(out_b), "--seed", "8", "dispersion"]) == 0
    assert (out_a / "dispersion.csv").read_bytes() != (out_b / "dispersion.csv").read_bytes()


def test_missing_data_file_exit_4(tmp_path):
    assert main(["--out", str(tmp_path / "o"), "null", "--data", str(tmp_path / "nope.csv")]) == 4
