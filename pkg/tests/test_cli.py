import json
import shutil
import subprocess

import numpy as np
import pytest

from convlab import read_cvlf, uniform_field, write_cvlf
from convlab.cli import main
from convlab.field import Grid

GRID_ARGS = ["--dim", "1", "--extent", "8", "--points", "256"]


@pytest.fixture(autouse=True)
def _in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


class TestTq:
    def test_stdout(self, capsys):
        assert main(["tq", "--coeffs", "1"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["t_q"] == pytest.approx(0.5, rel=1e-14)
        assert out["q_max"] == pytest.approx(0.25, rel=1e-14)

    def test_out_file_and_manifest(self, tmp_path):
        assert main(["tq", "--coeffs", "1,1", "--out", "tq.json"]) == 0
        out = read_json(tmp_path / "tq.json")
        assert out["t_q"] == pytest.approx(1.0 / 3.0, abs=1e-14)
        man = read_json(tmp_path / "convlab-manifest.json")
        assert man["tool"] == "convlab"
        assert man["exit_code"] == 0
        assert man["config"]["coeffs"] == "1,1"
        assert "wall_time_s" in man

    def test_rejects_zero_vector(self):
        assert main(["tq", "--coeffs", "0,0"]) == 2

    def test_argparse_errors(self):
        assert main([]) == 2
        assert main(["tq", "--coeffs", "1", "--no-such-flag"]) == 2


class TestSeries:
    def test_diagonal(self, tmp_path):
        code = main(["series", "--coeffs", "1", "--rows", "6", "--cap", "64", "--out", "s.json"])
        assert code == 0
        out = read_json(tmp_path / "s.json")
        assert out["diagonal"] == ["1", "1", "2", "5", "14", "42"]
        assert out["mass_certificate"][0] == pytest.approx(0.25, abs=1e-15)
        assert not out["table"]["cap_too_small"]

    def test_truncation_is_flagged(self, tmp_path):
        assert main(["series", "--coeffs", "1", "--rows", "6", "--cap", "16",
                     "--out", "s.json"]) == 0
        assert read_json(tmp_path / "s.json")["table"]["cap_too_small"] is True


class TestDisk:
    def test_certified(self, tmp_path):
        assert main(["disk", "--coeffs", "1,1", "--out", "d.json"]) == 0
        out = read_json(tmp_path / "d.json")
        assert out["certified"] is True
        assert out["injectivity_violations"] == 0


class TestConstructVerify:
    def test_chain(self, tmp_path, capsys):
        code = main(
            ["construct", "--coeffs", "1", *GRID_ARGS,
             "--psi", "gaussian:sigma=0.5,mass=0.2",
             "--out", "f.cvlf", "--report", "r.json"]
        )
        assert code == 0
        rep = read_json(tmp_path / "r.json")
        assert rep["converged"] is True
        assert rep["mass"] == pytest.approx(0.27639320225002106, abs=1e-8)
        assert rep["min_slack"] >= -1e-10

        assert main(["verify", "--coeffs", "1", "--field", "f.cvlf"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["slack_ok"] is True and out["mass_ok"] is True
        assert out["mass"] == pytest.approx(rep["mass"], rel=1e-12)

    def test_nonconvergent_exit_and_diagnostics(self, tmp_path):
        code = main(
            ["construct", "--coeffs", "1", *GRID_ARGS,
             "--psi", "gaussian:sigma=0.5,mass=0.25",
             "--max-iter", "5", "--out", "f.cvlf", "--report", "r.json"]
        )
        assert code == 3
        rep = read_json(tmp_path / "r.json")
        assert "error" in rep
        assert rep["report"]["iterations"] == 5
        assert (tmp_path / "f.cvlf").exists()
        assert read_json(tmp_path / "convlab-manifest.json")["exit_code"] == 3

    def test_mass_guard_exit(self):
        code = main(
            ["construct", "--coeffs", "1", *GRID_ARGS,
             "--psi", "gaussian:sigma=0.5,mass=0.3"]
        )
        assert code == 2

    def test_bad_field_specs(self):
        base = ["construct", "--coeffs", "1", *GRID_ARGS]
        assert main([*base, "--psi", "gaussian:mass=0.2"]) == 2
        assert main([*base, "--psi", "vortex:mass=0.2"]) == 2
        assert main([*base, "--psi", "gaussian:sigma=0.5,mass=0.1,skew=2"]) == 2
        assert main([*base, "--psi", "gaussian:sigma"]) == 2

    def test_file_seed_roundtrip(self, tmp_path):
        assert main(["witness", "--a", "0.2", "--t", "1", *GRID_ARGS, "--out", "w.cvlf"]) == 0
        code = main(
            ["construct", "--coeffs", "1", *GRID_ARGS,
             "--psi", "file:w.cvlf", "--report", "r.json"]
        )
        assert code == 0
        assert read_json(tmp_path / "r.json")["converged"] is True
        # same file on a mismatched grid is refused
        wrong = ["--dim", "1", "--extent", "8", "--points", "128"]
        assert main(["construct", "--coeffs", "1", *wrong, "--psi", "file:w.cvlf"]) == 2

    def test_csv_output(self, tmp_path):
        code = main(
            ["construct", "--coeffs", "1", *GRID_ARGS,
             "--psi", "gaussian:sigma=0.5,mass=0.1", "--out", "f.csv"]
        )
        assert code == 0
        lines = (tmp_path / "f.csv").read_text().splitlines()
        assert lines[0] == "x,value"
        assert len(lines) == 257


class TestWitness:
    def test_report(self, tmp_path):
        code = main(
            ["witness", "--a", "0.5", "--t", "1", *GRID_ARGS,
             "--out", "w.csv", "--report", "wr.json"]
        )
        assert code == 0
        rep = read_json(tmp_path / "wr.json")
        assert rep["mass"] == pytest.approx(0.5, abs=1e-12)
        assert rep["min_slack"] >= -1e-8
        assert (tmp_path / "w.csv").read_text().startswith("x,value")

    def test_decay_guard_exit(self):
        assert main(["witness", "--a", "0.3", "--t", "0.1", *GRID_ARGS]) == 2

    def test_amplitude_validation_exit(self):
        assert main(["witness", "--a", "0.7", "--t", "1", *GRID_ARGS]) == 2


class TestBose:
    def test_report(self, tmp_path):
        code = main(
            ["bose", "--V", "gaussian:sigma=0.6,mass=0.3", "--mu", "0.01",
             *GRID_ARGS, "--out", "u.cvlf", "--report", "b.json"]
        )
        assert code == 0
        rep = read_json(tmp_path / "b.json")
        assert rep["solve"]["converged"] is True
        assert rep["certificate"]["passed"] is True
        assert rep["hypothesis_value"] < 1.0
        u = read_cvlf(str(tmp_path / "u.cvlf"))
        assert float(u.values.max()) <= 1.0

    def test_not_converged_exit(self, tmp_path):
        code = main(
            ["bose", "--V", "gaussian:sigma=0.6,mass=0.45", *GRID_ARGS,
             "--max-iter", "1", "--report", "b.json"]
        )
        assert code == 3
        assert "error" in read_json(tmp_path / "b.json")

    def test_smallness_guard_exit(self):
        assert main(["bose", "--V", "gaussian:sigma=0.6,mass=0.8", *GRID_ARGS]) == 2


class TestVerify:
    def test_violation_exit(self, tmp_path):
        g = Grid(dim=1, extent=8.0, points_per_axis=256)
        write_cvlf(uniform_field(g, mass=3.0), str(tmp_path / "bad.cvlf"))
        assert main(["verify", "--coeffs", "1", "--field", "bad.cvlf", "--out", "v.json"]) == 3
        out = read_json(tmp_path / "v.json")
        assert out["slack_ok"] is False


class TestDeterminism:
    def test_identical_artifacts(self, tmp_path):
        argset = [
            "construct", "--coeffs", "1,1", *GRID_ARGS,
            "--psi", "gaussian:sigma=0.4,mass=0.1",
        ]
        assert main(["--manifest", "ma.json", *argset,
                     "--out", "a.cvlf", "--report", "ra.json"]) == 0
        assert main(["--manifest", "mb.json", *argset,
                     "--out", "b.cvlf", "--report", "rb.json"]) == 0
        assert (tmp_path / "a.cvlf").read_bytes() == (tmp_path / "b.cvlf").read_bytes()
        assert (tmp_path / "ra.json").read_bytes() == (tmp_path / "rb.json").read_bytes()
        ma = read_json(tmp_path / "ma.json")
        mb = read_json(tmp_path / "mb.json")
        ma.pop("wall_time_s"), mb.pop("wall_time_s")
        ma["config"].pop("out"), mb["config"].pop("out")
        ma["config"].pop("report"), mb["config"].pop("report")
        assert ma == mb


class TestConsoleScript:
    def test_entry_point(self, tmp_path):
        exe = shutil.which("convlab")
        assert exe, "console script not installed"
        run = subprocess.run(
            [exe, "tq", "--coeffs", "1"], cwd=tmp_path, capture_output=True, text=True
        )
        assert run.returncode == 0
        assert json.loads(run.stdout)["t_q"] == pytest.approx(0.5, rel=1e-14)
