import json
import os

import numpy as np
import pytest

from dicke_lab import cli
from dicke_lab.cli import ConfigError, load_config, parse_lambda_grid


def test_parse_lambda_grid():
    grid = parse_lambda_grid("0:2:0.5")
    assert np.allclose(grid, [0, 0.5, 1.0, 1.5, 2.0])
    assert parse_lambda_grid("1.3").tolist() == [1.3]
    with pytest.raises(ConfigError):
        parse_lambda_grid("2:1:0.5")
    with pytest.raises(ConfigError):
        parse_lambda_grid("0:1:0")
    with pytest.raises(ConfigError):
        parse_lambda_grid(None)


def test_load_config_flags_only():
    cfg = load_config(flags={"command": "scan-entropy", "j": 4.5,
                             "mode": "integrable", "lam": "0:2:0.01"})
    assert cfg.j == 4.5
    assert cfg.mode == "integrable"


def test_load_config_unknown_key(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"command": "scan-entropy", "couplingX": 1}))
    with pytest.raises(ConfigError, match="couplingX"):
        load_config(str(path))


def test_load_config_file_with_overrides(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"command": "fixed-points", "j": 1.5,
                                "mode": "integrable", "lambda": "0.5"}))
    cfg = load_config(str(path), flags={"j": 4.5})
    assert cfg.command == "fixed-points"
    assert cfg.j == 4.5
    assert cfg.lam == "0.5"


def test_bad_j_exits_1(tmp_path):
    rc = cli.main(["scan-entropy", "--j", "4.6", "--mode", "integrable",
                   "--lambda", "0:1:0.5", "--out", str(tmp_path)])
    assert rc == 1


def test_unknown_mode_exits_1(tmp_path):
    rc = cli.main(["scan-entropy", "--j", "4.5", "--mode", "integrable",
                   "--lambda", "nonsense", "--out", str(tmp_path)])
    assert rc == 1


def test_scan_entropy_artifacts(tmp_path):
    out = str(tmp_path / "run")
    rc = cli.main(["scan-entropy", "--j", "4.5", "--mode", "integrable",
                   "--lambda", "0.8:1.2:0.1", "--out", out])
    assert rc == 0
    lines = open(os.path.join(out, "entropy.csv")).read().splitlines()
    assert lines[0] == "lambda,lambda_plus,energy,entropy,participation,degenerate"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 5
    entropies = {round(float(r[0]), 9): float(r[3]) for r in rows}
    assert entropies[0.8] < 1e-10
    assert entropies[1.2] >= 0.5 - 1e-6
    assert os.path.exists(os.path.join(out, "config.json"))
    assert os.path.exists(os.path.join(out, "entropy.svg"))


def test_fixed_points_artifact(tmp_path):
    out = str(tmp_path / "fp")
    rc = cli.main(["fixed-points", "--j", "4.5", "--g", "0.75",
                   "--g-prime", "0.75", "--mode", "custom", "--out", out])
    assert rc == 0
    data = json.load(open(os.path.join(out, "fixed_points.json")))
    pf = [fp for fp in data["fixed_points"] if fp["kind"] == "pitchfork_I"]
    assert sorted(round(fp["p1"], 6) for fp in pf) == [
        round(-np.sqrt(5), 6), round(np.sqrt(5), 6)]


def test_trajectory_artifact(tmp_path):
    out = str(tmp_path / "tr")
    rc = cli.main(["trajectory", "--j", "4.5", "--mode", "symmetric",
                   "--lambda", "1.5", "--seed", "pitchfork+",
                   "--t-final", "5", "--out", out])
    assert rc == 0
    lines = open(os.path.join(out, "trajectory.csv")).read().splitlines()
    assert lines[0] == "t,q1,p1,q2,p2,energy"
    energies = [float(line.split(",")[5]) for line in lines[1:]]
    assert max(energies) - min(energies) < 1e-8


def test_numerical_failure_exits_2(tmp_path):
    rc = cli.main(["trajectory", "--j", "4.5", "--mode", "integrable",
                   "--lambda", "1.5", "--initial", "1,2,0,0",
                   "--t-final", "5", "--tol", "1e-30",
                   "--out", str(tmp_path / "x")])
    assert rc == 2


def test_svg_determinism(tmp_path):
    from dicke_lab import svgplot
    xs = np.linspace(0, 2, 40)
    ys = np.sin(xs)
    doc1 = svgplot.line_chart([("a", xs, ys)], xlabel="x", ylabel="y",
                              vlines=(1.0,))
    doc2 = svgplot.line_chart([("a", xs, ys)], xlabel="x", ylabel="y",
                              vlines=(1.0,))
    assert doc1 == doc2
    assert "svg" in doc1
