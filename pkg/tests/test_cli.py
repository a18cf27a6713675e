import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

BASE_CONFIG = """
[grid]
n_points = 64
half_width = 8.0
hbar = 1.0

[windows.phi0]
kind = "gaussian"
"""


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "phasequant.cli", *args],
                          capture_output=True, text=True)


def write_config(tmp_path, body):
    cfg = tmp_path / "config.toml"
    cfg.write_text(body)
    return cfg


class TestValidate:
    def test_valid_config(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG)
        r = run_cli("validate", str(cfg))
        assert r.returncode == 0, r.stderr
        assert "config ok" in r.stdout

    def test_malformed_toml(self, tmp_path):
        cfg = write_config(tmp_path, "[grid\nn_points = 64")
        r = run_cli("validate", str(cfg))
        assert r.returncode == 2
        assert "config error" in r.stderr

    def test_undefined_window_named(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG + """
[[tasks]]
type = "wigner"
window = "ghost"
""")
        r = run_cli("validate", str(cfg))
        assert r.returncode == 2
        assert "ghost" in r.stderr

    def test_odd_grid_rejected(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG.replace("n_points = 64", "n_points = 63"))
        r = run_cli("validate", str(cfg))
        assert r.returncode == 2
        assert "n_points" in r.stderr

    def test_duplicate_task_names(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG + """
[[tasks]]
type = "wigner"
window = "phi0"

[[tasks]]
type = "wigner"
window = "phi0"
""")
        r = run_cli("validate", str(cfg))
        assert r.returncode == 2
        assert "duplicate" in r.stderr

    def test_unknown_task_type(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG + """
[[tasks]]
type = "teleport"
""")
        r = run_cli("validate", str(cfg))
        assert r.returncode == 2
        assert "teleport" in r.stderr


class TestRun:
    def test_empty_task_list_writes_manifest(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG)
        out = tmp_path / "out"
        r = run_cli("run", str(cfg), "--output-dir", str(out))
        assert r.returncode == 0, r.stderr
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["tasks"] == []
        assert manifest["grid"]["n_points"] == 64

    def test_wigner_task_origin_value(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG + """
[[tasks]]
type = "wigner"
window = "phi0"
""")
        out = tmp_path / "out"
        r = run_cli("run", str(cfg), "--output-dir", str(out), "--quiet")
        assert r.returncode == 0, r.stderr
        report = json.loads((out / "wigner_report.json").read_text())
        assert abs(report["value_at_origin"] - 1 / np.pi) < 1e-10
        # grid CSV parses and the origin entry matches the report
        rows = (out / "wigner_grid.csv").read_text().strip().split("\n")
        assert len(rows) == 65
        middle = rows[33].split(",")
        assert float(middle[0]) == 0.0          # x coordinate column
        assert abs(float(middle[33]) - report["value_at_origin"]) < 1e-15
        for coord in ("wigner_xgrid.csv", "wigner_pgrid.csv"):
            assert (out / coord).exists()

    def test_density_task_report(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG + """
[[tasks]]
type = "density"
name = "thermal"
window = "phi0"
mu = {kind = "gaussian", variance = 1.0}
""")
        out = tmp_path / "out"
        r = run_cli("run", str(cfg), "--output-dir", str(out), "--quiet")
        assert r.returncode == 0, r.stderr
        report = json.loads((out / "thermal_report.json").read_text())
        assert report["verdict"] is True
        assert abs(report["purity"] - 1 / 3) < 1e-4
        assert abs(report["raw_trace"] - 1.0) < 1e-6
        spectrum = (out / "thermal_spectrum.csv").read_text().strip().split("\n")
        assert spectrum[0] == "k,eigenvalue"
        assert abs(float(spectrum[1].split(",")[1]) - 0.5) < 1e-4

    def test_atoms_measure_and_samples_roundtrip(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG + """
[[tasks]]
type = "density"
name = "pair"
window = "phi0"
mu = {kind = "atoms", atoms = [[1.0, 0.0, 0.5], [-1.0, 0.0, 0.5]]}
""")
        out = tmp_path / "out"
        r = run_cli("run", str(cfg), "--output-dir", str(out), "--quiet")
        assert r.returncode == 0, r.stderr
        report = json.loads((out / "pair_report.json").read_text())
        assert abs(report["purity"] - 0.5 * (1 + np.exp(-2))) < 1e-6

    def test_task_failure_preserves_prior_outputs(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG + """
[[tasks]]
type = "wigner"
window = "phi0"

[[tasks]]
type = "density"
name = "broken"
window = "phi0"
mu = {kind = "samples", path = "missing.csv"}
""")
        out = tmp_path / "out"
        r = run_cli("run", str(cfg), "--output-dir", str(out), "--quiet")
        assert r.returncode == 1
        assert (out / "wigner_report.json").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        statuses = {t["name"]: t["status"] for t in manifest["tasks"]}
        assert statuses["wigner"] == "ok"
        assert statuses["broken"].startswith("error")

    def test_reproducible_csv_bodies(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG + """
[[tasks]]
type = "wigner"
window = "phi0"
""")
        outs = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            r = run_cli("run", str(cfg), "--output-dir", str(out), "--quiet")
            assert r.returncode == 0, r.stderr
            outs.append((out / "wigner_grid.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_threads_flag_accepted(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG + """
[[tasks]]
type = "wigner"
window = "phi0"
""")
        out = tmp_path / "out"
        r = run_cli("--threads", "1", "run", str(cfg), "--output-dir", str(out), "--quiet")
        assert r.returncode == 0, r.stderr

    def test_remaining_task_types(self, tmp_path):
        cfg = write_config(tmp_path, BASE_CONFIG + """
[[tasks]]
type = "toeplitz"
window = "phi0"
symbol = {kind = "gaussian", variance = [0.6, 1.5]}
paths = ["direct", "conv"]

[[tasks]]
type = "covariance"
window = "phi0"
symbol = {kind = "gaussian", variance = [0.6, 1.5]}
words = [["fourier"], ["chirp(0.5)"]]

[[tasks]]
type = "norms"
window = "phi0"
mu = {kind = "gaussian", variance = 1.0}
points = [12]

[[tasks]]
type = "bench"
sizes = [32]
""")
        out = tmp_path / "out"
        r = run_cli("run", str(cfg), "--output-dir", str(out), "--quiet")
        assert r.returncode == 0, r.stderr
        toeplitz = json.loads((out / "toeplitz_report.json").read_text())
        assert toeplitz["relative_frobenius_distance"] < 1e-6
        cov = json.loads((out / "covariance_report.json").read_text())
        assert all(res["weyl"] < 1e-6 for res in cov["residuals"])
        norms = json.loads((out / "norms_report.json").read_text())
        assert abs(norms["m1_window"]["value"] - 1.0) < 1e-6
        bench = json.loads((out / "bench_report.json").read_text())
        assert bench["timings"][0]["n_points"] == 32
        assert bench["timings"][0]["speedup"] > 0
