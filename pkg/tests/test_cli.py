import os

import pytest

from teeter.cli import ConfigError, load_config, main


def run(args):
    return main(args)


def test_simulate_writes_outputs(tmp_path):
    out = str(tmp_path / "sim")
    code = run(["simulate", "--a", "2.5", "--b", "2", "--tau", "0.25",
                "--s", "-0.3", "--theta0", "0.4", "--tmax", "5",
                "--out", out, "--plot"])
    assert code == 0
    assert os.path.exists(os.path.join(out, "trajectory.csv"))
    assert os.path.exists(os.path.join(out, "events.csv"))
    assert os.path.exists(os.path.join(out, "phase.svg"))
    with open(os.path.join(out, "trajectory.csv")) as fh:
        header = fh.readline().strip()
    assert header == "t,theta,phi,control_on,H"


def test_simulate_is_deterministic(tmp_path):
    args = ["simulate", "--a", "2.5", "--b", "2", "--tau", "0.25",
            "--s", "-0.3", "--theta0", "0.4", "--tmax", "3"]
    out1, out2 = str(tmp_path / "r1"), str(tmp_path / "r2")
    assert run(args + ["--out", out1]) == 0
    assert run(args + ["--out", out2]) == 0
    with open(os.path.join(out1, "trajectory.csv"), "rb") as fh:
        b1 = fh.read()
    with open(os.path.join(out2, "trajectory.csv"), "rb") as fh:
        b2 = fh.read()
    assert b1 == b2


def test_config_file_round_trip(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\na = 2.5\nb=2\ntau = 0.25\ns = -0.3\n"
                   "theta0 = 0.4\ntmax = 2\n")
    out = str(tmp_path / "o")
    assert run(["simulate", "--config", str(cfg), "--out", out]) == 0
    loaded = load_config(str(cfg))
    assert loaded["a"] == "2.5"
    assert "comment" not in loaded


def test_bad_config_value_exits_one(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("a = not_a_number\n")
    assert run(["simulate", "--config", str(cfg),
                "--out", str(tmp_path / "o")]) == 1
    assert "error" in capsys.readouterr().err


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("frobnicate = 3\n")
    assert run(["simulate", "--config", str(cfg),
                "--out", str(tmp_path / "o")]) == 1
    assert "unknown config key" in capsys.readouterr().err


def test_invalid_params_exit_nonzero(tmp_path):
    assert run(["simulate", "--a", "1", "--b", "1", "--tau", "-1",
                "--out", str(tmp_path / "o")]) != 0


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("a = 2.5\nb = 2\ntau = 0.25\ns = -0.3\ntmax = 50\n"
                   "theta0 = 0.4\n")
    out = str(tmp_path / "o")
    assert run(["simulate", "--config", str(cfg), "--tmax", "1",
                "--out", out]) == 0
    with open(os.path.join(out, "trajectory.csv")) as fh:
        last = fh.readlines()[-1]
    assert float(last.split(",")[0]) <= 1.0 + 1e-9


def test_asymptote_grid_output(tmp_path):
    out = str(tmp_path / "o")
    assert run(["asymptote", "--curve", "dib", "--a-grid", "1.2:1.8:4",
                "--b", "2", "--s", "-0.01", "--out", out]) == 0
    with open(os.path.join(out, "curve_dib.csv")) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    assert lines[0].strip() == "a,tau"
    assert len(lines) == 5
