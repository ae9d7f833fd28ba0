import json
import subprocess
import sys
from pathlib import Path

import pytest


def run_cli(*args, check=True):
    cp = subprocess.run(
        [sys.executable, "-m", "gainslab", *args],
        capture_output=True, text=True,
    )
    if check and cp.returncode != 0:
        raise AssertionError(f"CLI failed ({cp.returncode}): {cp.stderr}")
    return cp


def parse_csv(text):
    lines = [ln for ln in text.strip().splitlines() if ln]
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        rows.append(dict(zip(header, line.split(","))))
    return header, rows


def test_bounds_published_values():
    cp = run_cli("bounds", "--pump", "double")
    _, rows = parse_csv(cp.stdout)
    assert len(rows) == 1
    assert float(rows[0]["nu_max"]) == pytest.approx(3.01714112, abs=1e-6)
    assert float(rows[0]["damping_max"]) == pytest.approx(0.9510590651, abs=1e-8)
    # without --pump both geometries are reported
    _, both = parse_csv(run_cli("bounds").stdout)
    assert [r["pump"] for r in both] == ["double", "single"]


def test_table1_contains_published_row():
    cp = run_cli("table1")
    _, rows = parse_csv(cp.stdout)
    assert len(rows) == 20
    row = next(r for r in rows if r["m"] == "1360" and r["nu"] == "0.1")
    assert float(row["lambda_nm"]) == pytest.approx(1499.9999831, abs=5e-7)
    assert float(row["g_star_cm"]) == pytest.approx(40.60936, abs=5e-5)


def test_solve_csv_round_trips_at_twelve_digits():
    cp = run_cli("solve", "--m", "1360", "--nu", "0.1")
    header, rows = parse_csv(cp.stdout)
    assert header == ["m", "nu", "K", "lambda_nm", "g_star_cm",
                      "residual", "ode_residual", "method"]
    # printing the parsed floats again reproduces the emitted text exactly
    from gainslab.cli import render_csv

    parsed = []
    for row in rows:
        typed = dict(row)
        typed["m"] = int(row["m"])
        for col in ("nu", "K", "lambda_nm", "g_star_cm", "residual", "ode_residual"):
            typed[col] = float(row[col])
        parsed.append(typed)
    assert render_csv(header, parsed) == cp.stdout


def test_reruns_are_byte_identical():
    first = run_cli("solve", "--m", "1355")
    second = run_cli("solve", "--m", "1355")
    assert first.stdout == second.stdout


def test_flag_overrides_config_file(tmp_path: Path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# slab under test\n"
        "medium.nu = 0.7\n"
        "medium.g_star = 60 cm^-1\n"
        "run.format = json\n"
    )
    # file value visible when no flag is given
    out = json.loads(run_cli("bounds", "--config", str(cfg)).stdout)
    assert out["config"]["medium.nu"] == 0.7
    assert out["config"]["medium.g_star"] == 60.0
    # flag beats file; file still beats defaults for untouched keys
    out = json.loads(run_cli("bounds", "--config", str(cfg), "--nu", "0.9").stdout)
    assert out["config"]["medium.nu"] == 0.9
    assert out["config"]["medium.g_star"] == 60.0
    # and the file format choice can itself be overridden
    cp = run_cli("bounds", "--config", str(cfg), "--format", "csv")
    assert cp.stdout.startswith("pump,")


def test_unknown_config_key_is_reported(tmp_path: Path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("medium.thickness = 3\n")
    cp = run_cli("solve", "--config", str(cfg), check=False)
    assert cp.returncode == 1
    assert "medium.thickness" in cp.stderr


def test_unit_suffix_mismatch_is_reported(tmp_path: Path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("medium.lambda0 = 1.5 um\n")
    cp = run_cli("solve", "--config", str(cfg), check=False)
    assert cp.returncode == 1
    assert "nm" in cp.stderr
    # correct suffixes are accepted
    cfg.write_text("medium.lambda0 = 1500 nm\nmedium.L = 300 um\n")
    assert run_cli("validate", "--config", str(cfg)).returncode == 0


def test_unknown_flag_is_config_error():
    cp = run_cli("solve", "--frequency", "1.0", check=False)
    assert cp.returncode == 1


def test_partial_numerical_failure_exit_code():
    # one Newton iteration cannot reach an edge mode from the analytic seed
    cp = run_cli("solve", "--m", "1333", "--nu", "0.2", "--max-iter", "1",
                 "--format", "json", check=False)
    assert cp.returncode == 2
    out = json.loads(cp.stdout)
    assert out["meta"]["numerical_failures"] == 1
    assert out["results"] == []


def test_enumerate_census(tmp_path: Path):
    out_path = tmp_path / "census.json"
    cp = run_cli("enumerate", "--m", "1331..1334", "--nu", "0.2",
                 "--format", "json", "--out", str(out_path))
    assert cp.returncode == 0
    data = json.loads(out_path.read_text())
    assert [r["m"] for r in data["results"]] == [1333, 1334]
    assert data["meta"]["unphysical_failures"] == 2
    assert all(r["ode_residual"] < 1e-5 for r in data["results"])


def test_scan_nu_rows_ordered():
    cp = run_cli("scan-nu", "--m", "1360", "--nu-grid", "0,0.25,0.5")
    _, rows = parse_csv(cp.stdout)
    gains = [float(r["g_star_cm"]) for r in rows]
    assert [float(r["nu"]) for r in rows] == [0.0, 0.25, 0.5]
    assert gains == sorted(gains)


def test_bad_nu_grid_rejected():
    cp = run_cli("scan-nu", "--m", "1360", "--nu-grid", "0.5,0.2", check=False)
    assert cp.returncode == 1


def test_fig2_data_and_plot(tmp_path: Path):
    out_path = tmp_path / "gain_curves.csv"
    run_cli("fig2-data", "--nu-grid", "0,0.5,1,2", "--out", str(out_path), "--plot")
    header, rows = parse_csv(out_path.read_text())
    assert header == ["nu", "g_star_double_cm", "g_star_single_cm"]
    assert len(rows) == 4
    # the two geometries coincide in the uniform limit
    assert float(rows[0]["g_star_double_cm"]) == pytest.approx(
        float(rows[0]["g_star_single_cm"]), rel=1e-12)
    png = tmp_path / "gain_curves.png"
    assert png.exists() and png.stat().st_size > 0


def test_plot_requires_out_to_derive_path():
    cp = run_cli("fig2-data", "--nu-grid", "0,1", "--plot", check=False)
    assert cp.returncode == 1


def test_validate_reports_wkb_quality():
    cp = run_cli("validate", "--omega-hat", "1.0")
    _, rows = parse_csv(cp.stdout)
    row = rows[0]
    assert float(row["validity_metric"]) < 1e-7
    assert row["validity_warning"] == "false"
    assert float(row["wkb_ode_rel_diff"]) < 1e-6


def test_validate_warns_outside_semiclassical_regime():
    # a wavelength-thin, strongly absorbing slab leaves the WKB regime
    cp = run_cli("validate", "--L", "0.5", "--nu", "5", "--alpha0", "10000",
                 "--g-star", "9000")
    _, rows = parse_csv(cp.stdout)
    assert rows[0]["validity_warning"] == "true"
    assert "validity" in cp.stderr


def test_critical_nu_command():
    cp = run_cli("critical-nu", "--m", "1360", "--bisect-tol", "0.01")
    _, rows = parse_csv(cp.stdout)
    assert 2.9 < float(rows[0]["nu_critical"]) < 3.1


def test_fig3_default_yields_full_mode_comb():
    cp = run_cli("fig3-data", "--format", "json")
    out = json.loads(cp.stdout)
    ms = [r["m"] for r in out["results"]]
    assert len(ms) == 55 and ms[0] == 1333 and ms[-1] == 1387


def test_timing_flag_controls_json_meta(tmp_path: Path):
    without = json.loads(run_cli("bounds", "--format", "json").stdout)
    assert "wall_time_s" not in without["meta"]
    with_timing = json.loads(run_cli("bounds", "--format", "json", "--timing").stdout)
    assert "wall_time_s" in with_timing["meta"]
