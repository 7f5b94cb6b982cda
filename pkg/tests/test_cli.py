import csv

import pytest
from click.testing import CliRunner

from microjumper import config as cfg
from microjumper.cli import main
from microjumper.model import BASELINE, BASELINE_DRIVE, DriveSource, set_path


@pytest.fixture
def runner():
    return CliRunner()


def write_config(tmp_path, design=BASELINE, drive=BASELINE_DRIVE, name="design.toml"):
    path = tmp_path / name
    cfg.dump(cfg.RunConfig(design, drive), path)
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_evaluate_baseline(runner, tmp_path):
    res = runner.invoke(main, ["evaluate", "--config", write_config(tmp_path), "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    for token in ("11.25 uJ", "15 uNm", "7.5 uNm", "8 mA", "6.4 mW", "0.8 V", "15.29 mm"):
        assert token in res.output
    assert (tmp_path / "evaluate.txt").read_text() == res.output


def test_evaluate_doubled_stiffness_halves_energy(runner, tmp_path):
    d = set_path(BASELINE, "spring.stiffness", 5.0)
    res = runner.invoke(main, ["evaluate", "--config", write_config(tmp_path, d)])
    assert res.exit_code == 0, res.output
    assert "5.625 uJ" in res.output


def test_malformed_config_exits_2(runner, tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[spring]\nstiffness = = 2\n")
    res = runner.invoke(main, ["evaluate", "--config", str(bad)])
    assert res.exit_code == 2
    assert "line" in res.output


def test_invalid_design_exits_2_without_output(runner, tmp_path):
    d = set_path(BASELINE, "ratchet.winding_efficiency", 2.0)
    out = tmp_path / "out"
    res = runner.invoke(main, ["simulate", "--config", write_config(tmp_path, d), "--out", str(out)])
    assert res.exit_code == 2
    assert "winding_efficiency" in res.output
    assert not out.exists()


def test_simulate_release_and_csv_schema(runner, tmp_path):
    out = tmp_path / "run"
    res = runner.invoke(main, ["simulate", "--out", str(out)])
    assert res.exit_code == 0, res.output
    assert res.output.startswith("released")
    wind = (out / "wind.csv").read_bytes()
    assert wind.startswith(b"cycle,time_s,deflection_m,tension_N\n")
    assert b"\r" not in wind
    assert (out / "flight.csv").read_bytes().startswith(b"time_s,height_m,velocity_mps\n")
    assert len(read_csv(out / "wind.csv")) == 86
    assert (out / "cycle.png").exists()


def test_simulate_stall_exits_0(runner, tmp_path):
    cfg_path = write_config(tmp_path, drive=DriveSource(amplitude=0.7))
    res = runner.invoke(main, ["simulate", "--config", cfg_path, "--out", str(tmp_path / "s"), "--no-plots"])
    assert res.exit_code == 0
    assert res.output.startswith("stall")
    assert read_csv(tmp_path / "s" / "flight.csv") == []


def test_simulate_byte_identical(runner, tmp_path):
    for name in ("a", "b"):
        runner.invoke(main, ["simulate", "--out", str(tmp_path / name), "--no-plots"])
    for f in ("wind.csv", "flight.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_sweep_amplitude_threshold(runner, tmp_path):
    res = runner.invoke(main, ["sweep", "--var", "drive.amplitude:0.5V:1.0V", "--points", "11",
                               "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    rows = read_csv(tmp_path / "sweep.csv")
    released = {round(float(r["value"]), 3): r["released"] == "1" for r in rows}
    assert not released[0.7] and released[0.8]
    flips = [v for v in sorted(released) if released[v]]
    assert 0.7 < flips[0] <= 0.8
    assert (tmp_path / "sweep.png").exists()


def test_sweep_arm_apex_non_decreasing(runner, tmp_path):
    res = runner.invoke(main, ["sweep", "--var", "actuator.moment_arm_length:4mm:16mm",
                               "--points", "7", "--out", str(tmp_path), "--no-plots"])
    assert res.exit_code == 0
    apex = [float(r["apex_m"]) for r in read_csv(tmp_path / "sweep.csv")]
    assert all(a <= b for a, b in zip(apex, apex[1:]))


def test_one_point_sweep_matches_evaluate(runner, tmp_path):
    res = runner.invoke(main, ["sweep", "--var", "actuator.moment_arm_length:8mm:8mm",
                               "--points", "1", "--out", str(tmp_path), "--no-plots"])
    assert res.exit_code == 0
    (row,) = read_csv(tmp_path / "sweep.csv")
    from microjumper.optimize import evaluate_design

    report = evaluate_design(BASELINE, BASELINE_DRIVE)
    assert float(row["apex_m"]) == report.apex_height
    assert float(row["torque_margin_Nm"]) == report.torque_margin


def test_sweep_unknown_field_exits_2(runner):
    res = runner.invoke(main, ["sweep", "--var", "actuator.wings:1:2"])
    assert res.exit_code == 2
    assert "actuator.moment_arm_length" in res.output


def test_optimize_round_trip(runner, tmp_path):
    res = runner.invoke(main, ["optimize", "--var", "actuator.moment_arm_length:4mm:16mm",
                               "--var", "ratchet.shaft_radius:0.5mm:1.5mm", "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    best = cfg.load(tmp_path / "best_design.toml")
    rows = read_csv(tmp_path / "history.csv")
    best_row = max((r for r in rows if r["feasible"] == "1"), key=lambda r: float(r["objective"]))
    from microjumper.optimize import evaluate_design

    assert evaluate_design(best.design, best.drive).apex_height == float(best_row["objective"])
    ev = runner.invoke(main, ["evaluate", "--config", str(tmp_path / "best_design.toml")])
    assert ev.exit_code == 0
    assert (tmp_path / "history.png").exists()


def test_optimize_seed_does_not_change_result(runner, tmp_path):
    args = ["optimize", "--var", "actuator.moment_arm_length:4mm:16mm", "--no-plots"]
    runner.invoke(main, args + ["--seed", "1", "--out", str(tmp_path / "a")])
    runner.invoke(main, args + ["--seed", "2", "--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "history.csv").read_bytes() == (tmp_path / "b" / "history.csv").read_bytes()
    assert (tmp_path / "a" / "best_design.toml").read_bytes() == (tmp_path / "b" / "best_design.toml").read_bytes()


def test_optimize_without_variables_exits_2(runner):
    assert runner.invoke(main, ["optimize"]).exit_code == 2


def test_optimize_infeasible_exits_3(runner, tmp_path):
    cfg_path = write_config(tmp_path, drive=DriveSource(amplitude=0.3))
    res = runner.invoke(main, ["optimize", "--config", cfg_path, "--var",
                               "actuator.moment_arm_length:1mm:2mm", "--out", str(tmp_path / "o"),
                               "--no-plots"])
    assert res.exit_code == 3


def test_unknown_scale_is_a_usage_error(tmp_path):
    res = CliRunner().invoke(main, ["optimize", "--var", "spring.stiffness:1.5:5:cubic",
                                    "--out", str(tmp_path), "--no-plots"])
    assert res.exit_code == 2
    assert "unknown scale" in res.output
    assert not any(tmp_path.iterdir())
