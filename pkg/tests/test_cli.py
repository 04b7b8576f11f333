import json

import numpy as np
import pytest

from swim3d import cli


def base_config(prefix):
    return {
        "drag": {"k": 1.0, "L": 1.0},
        "gait": {
            "period": 1.0,
            "coordinates": {
                "theta1": {"offset": 0.0, "harmonics": [[1, 0.5, 0.0]]},
                "theta2": {"offset": 0.0, "harmonics": [[1, 0.5, 1.5707963267948966]]},
            },
        },
        "sim": {"dt": 0.005, "cycles": 1, "record_stride": 5},
        "slice": {
            "coords": ["theta1", "theta2"],
            "ranges": [[-0.5, 0.5], [-0.5, 0.5]],
            "counts": [3, 3],
            "fixed": {"phi1": 0.3, "phi2": 0.3},
            "row": 1,
        },
        "objective": {
            "target": "x_displacement",
            "penalty_weight": 10.0,
            "amplitude_bound": 1.2,
        },
        "optimizer": {
            "max_evaluations": 30,
            "simplex_scale": 0.2,
            "seed": 0,
            "free_coordinates": ["theta1", "theta2"],
        },
        "output": {"prefix": prefix},
    }


@pytest.fixture
def config_path(tmp_path):
    def write(cfg):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(cfg))
        return str(path)

    return write


class TestSimulate:
    def test_trajectory_and_summary(self, tmp_path, config_path):
        prefix = str(tmp_path / "run")
        assert cli.main(["simulate", "--config", config_path(base_config(prefix))]) == 0
        lines = (tmp_path / "run_trajectory.csv").read_text().splitlines()
        assert lines[0].split(",") == [
            "t", "x", "y", "z", "qw", "qx", "qy", "qz",
            "theta1", "phi1", "theta2", "phi2",
            "vx", "vy", "vz", "wx", "wy", "wz",
        ]
        assert len(lines) == 1 + 1 + 200 // 5  # header + t=0 + recorded steps
        summary = json.loads((tmp_path / "run_summary.json").read_text())
        assert summary["step_count"] == 200
        assert abs(abs(summary["final_position"][0]) - 0.091) < 0.001

    def test_zero_amplitude_gait(self, tmp_path, config_path):
        cfg = base_config(str(tmp_path / "run"))
        cfg["gait"]["coordinates"] = {
            "phi1": {"offset": 0.4},
            "phi2": {"offset": 0.4},
        }
        assert cli.main(["simulate", "--config", config_path(cfg)]) == 0
        summary = json.loads((tmp_path / "run_summary.json").read_text())
        assert summary["per_cycle_displacement"][0]["displacement_norm"] < 1e-12
        rows = (tmp_path / "run_trajectory.csv").read_text().splitlines()[1:]
        positions = {tuple(r.split(",")[1:4]) for r in rows}
        assert positions == {("0", "0", "0")}

    def test_missing_drag_k_exits_2(self, tmp_path, config_path, capsys):
        cfg = base_config(str(tmp_path / "run"))
        del cfg["drag"]["k"]
        assert cli.main(["simulate", "--config", config_path(cfg)]) == 2
        assert "drag.k" in capsys.readouterr().err

    def test_singular_gait_exits_3(self, tmp_path, config_path):
        cfg = base_config(str(tmp_path / "run"))
        cfg["gait"]["coordinates"] = {"theta1": {"harmonics": [[1, 0.3, 0.0]]}}
        assert cli.main(["simulate", "--config", config_path(cfg)]) == 3


class TestField:
    def test_grid_rows(self, tmp_path, config_path):
        prefix = str(tmp_path / "f")
        assert cli.main(["field", "--config", config_path(base_config(prefix))]) == 0
        lines = (tmp_path / "f_field.csv").read_text().splitlines()
        assert len(lines) == 1 + 9
        header = lines[0].split(",")
        assert header[:4] == ["theta1", "theta2", "phi1", "phi2"]
        assert header[4] == "A11" and header[27] == "A64"
        assert header[-2:] == ["condition", "singular"]

    def test_singular_node_empty_columns(self, tmp_path, config_path):
        cfg = base_config(str(tmp_path / "f"))
        cfg["slice"]["fixed"] = {"phi1": 0.0, "phi2": 0.0}
        cfg["slice"]["ranges"] = [[-0.2, 0.2], [-0.2, 0.2]]
        assert cli.main(["field", "--config", cfg and config_path(cfg)]) == 0
        lines = (tmp_path / "f_field.csv").read_text().splitlines()
        flagged = [l for l in lines[1:] if l.endswith(",true")]
        assert len(flagged) == 1
        cells = flagged[0].split(",")
        assert cells[0] == "0" and cells[1] == "0"
        assert all(c == "" for c in cells[4:28])

    def test_rerun_byte_identical(self, tmp_path, config_path):
        cfg = base_config(str(tmp_path / "f"))
        path = config_path(cfg)
        assert cli.main(["field", "--config", path]) == 0
        first = (tmp_path / "f_field.csv").read_bytes()
        assert cli.main(["field", "--config", path]) == 0
        assert (tmp_path / "f_field.csv").read_bytes() == first


class TestCurvature:
    def test_grid_rows(self, tmp_path, config_path):
        prefix = str(tmp_path / "c")
        assert cli.main(["curvature", "--config", config_path(base_config(prefix))]) == 0
        lines = (tmp_path / "c_curvature.csv").read_text().splitlines()
        assert len(lines) == 1 + 9
        assert lines[0].split(",")[-1] == "curvature_row1"

    def test_singular_adjacent_blank(self, tmp_path, config_path):
        cfg = base_config(str(tmp_path / "c"))
        cfg["slice"]["fixed"] = {"phi1": 0.0, "phi2": 0.0}
        cfg["slice"]["ranges"] = [[-0.2, 0.2], [-0.2, 0.2]]
        cfg["slice"]["counts"] = [5, 5]
        assert cli.main(["curvature", "--config", config_path(cfg)]) == 0
        lines = (tmp_path / "c_curvature.csv").read_text().splitlines()[1:]
        blanks = [l for l in lines if l.endswith(",")]
        assert len(blanks) == 5  # singular node plus its four stencil neighbours

    def test_too_small_grid_exits_2(self, tmp_path, config_path):
        cfg = base_config(str(tmp_path / "c"))
        cfg["slice"]["counts"] = [2, 2]
        assert cli.main(["curvature", "--config", config_path(cfg)]) == 2

    def test_rerun_byte_identical(self, tmp_path, config_path):
        path = config_path(base_config(str(tmp_path / "c")))
        assert cli.main(["curvature", "--config", path]) == 0
        first = (tmp_path / "c_curvature.csv").read_bytes()
        assert cli.main(["curvature", "--config", path]) == 0
        assert (tmp_path / "c_curvature.csv").read_bytes() == first


class TestOptimize:
    def test_outputs(self, tmp_path, config_path):
        prefix = str(tmp_path / "o")
        cfg = base_config(prefix)
        cfg["gait"]["coordinates"]["theta1"]["harmonics"] = [[1, 0.1, 0.0]]
        cfg["gait"]["coordinates"]["theta2"]["harmonics"] = [[1, 0.1, 1.5707963267948966]]
        assert cli.main(["optimize", "--config", config_path(cfg)]) == 0
        best = json.loads((tmp_path / "o_best_gait.json").read_text())
        assert best["objective"] >= best["initial_objective"]
        lines = (tmp_path / "o_trace.csv").read_text().splitlines()
        assert lines[0] == "evaluation,objective,incumbent"
        assert len(lines) >= 30

    def test_seed_rerun_identical_trace(self, tmp_path, config_path):
        path = config_path(base_config(str(tmp_path / "o")))
        assert cli.main(["optimize", "--config", path]) == 0
        first = (tmp_path / "o_trace.csv").read_bytes()
        assert cli.main(["optimize", "--config", path]) == 0
        assert (tmp_path / "o_trace.csv").read_bytes() == first


class TestCheck:
    def test_all_pass(self, capsys):
        assert cli.main(["check"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 5
        assert "force_balance" in out

    def test_omega2_sign_flip_fails(self, capsys):
        assert cli.main(["check", "--inject-omega2-sign-flip"]) == 1
        out = capsys.readouterr().out
        assert "FAIL force_balance" in out


class TestOutOverride:
    def test_out_flag(self, tmp_path, config_path):
        cfg = base_config(str(tmp_path / "ignored"))
        other = str(tmp_path / "elsewhere")
        assert cli.main(["field", "--config", config_path(cfg), "--out", other]) == 0
        assert (tmp_path / "elsewhere_field.csv").exists()
