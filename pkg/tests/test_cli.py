import json
import math

import numpy as np
import pytest

import kovtop as kt
from kovtop.cli import main


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestParams:
    def test_json_to_file(self, tmp_path):
        out = tmp_path / "p.json"
        assert main(["params", "--a", "2", "--b", "1", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["p2"] == 5.0 and data["r2"] == 3.0
        assert len(data["separating_lines"]) == 8

    def test_invalid_magnitudes_exit_1(self, capsys, tmp_path):
        assert main(["params", "--a", "1", "--b", "1"]) == 1
        assert "error" in capsys.readouterr().err


class TestUsageErrors:
    def test_malformed_flag(self):
        assert main(["simulate", "--a", "2", "--b", "1", "--nope", "3"]) == 2

    def test_missing_subcommand(self):
        assert main([]) == 2

    def test_bad_choice(self):
        assert main(["period", "--a", "2", "--b", "1", "--m", "1", "--l", "3.5",
                     "--which", "s3"]) == 2

    def test_csv_rejected_for_json_only_commands(self, capsys):
        rc = main(["params", "--a", "2", "--b", "1", "--format", "csv"])
        assert rc == 2
        assert "JSON only" in capsys.readouterr().err


class TestSimulate:
    def test_equilibrium_constant_columns(self, tmp_path):
        out = tmp_path / "eq.csv"
        rc = main(["simulate", "--a", "2", "--b", "1",
                   "--m", str(1 / 3), "--l", str(1 / 3), "--s1", "2", "--s2", "-1",
                   "--t-end", "5", "--dt", "1", "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header[:4] == ["t", "omega1", "omega2", "omega3"]
        cols = np.array([[float(v) for v in row] for row in rows])
        for j in range(1, 10):
            assert np.allclose(cols[:, j], cols[0, j], atol=1e-12)
        drift = json.loads((tmp_path / "eq.csv.drift.json").read_text())["drift"]
        assert all(drift[k] < 1e-12 for k in ("H", "K", "G", "F", "M"))

    def test_reconstructed_run_drift_and_casimir_rows(self, tmp_path):
        out = tmp_path / "run.csv"
        rc = main(["simulate", "--a", "2", "--b", "1",
                   "--m", "1", "--l", "3.5", "--s1", "2.1", "--s2", "0.3",
                   "--t-end", "20", "--dt", "0.5", "--out", str(out)])
        assert rc == 0
        drift = json.loads((tmp_path / "run.csv.drift.json").read_text())["drift"]
        assert all(drift[k] < 1e-6 for k in ("H", "K", "G", "F", "M"))
        header, rows = read_csv(out)
        i_a = header.index("alpha1")
        i_b = header.index("beta1")
        for row in rows:
            al = np.array([float(v) for v in row[i_a:i_a + 3]])
            be = np.array([float(v) for v in row[i_b:i_b + 3]])
            assert abs(al @ al - 4.0) / 4.0 < 1e-9
            assert abs(be @ be - 1.0) < 1e-9
            assert abs(al @ be) < 1e-9

    def test_explicit_state_flag(self, tmp_path):
        out = tmp_path / "s.csv"
        rc = main(["simulate", "--a", "2", "--b", "1",
                   "--state", "0,0,0,2,0,0,0,1,0",
                   "--t-end", "1", "--dt", "0.5", "--out", str(out)])
        assert rc == 0

    def test_inadmissible_state_exit_1(self, tmp_path, capsys):
        rc = main(["simulate", "--a", "2", "--b", "1",
                   "--state", "0,0,0,2.5,0,0,0,1,0",
                   "--t-end", "1", "--dt", "0.5", "--out", str(tmp_path / "x.csv")])
        assert rc == 1
        assert "Casimir" in capsys.readouterr().err

    def test_missing_initial_condition_exit_1(self, tmp_path):
        rc = main(["simulate", "--a", "2", "--b", "1",
                   "--t-end", "1", "--dt", "0.5", "--out", str(tmp_path / "x.csv")])
        assert rc == 1

    def test_determinism_byte_identical(self, tmp_path):
        args = ["simulate", "--a", "2", "--b", "1", "--m", "1", "--l", "3.5",
                "--s1", "2.1", "--s2", "0.3", "--t-end", "3", "--dt", "0.25"]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        d1 = (tmp_path / "a.csv.drift.json").read_bytes()
        d2 = (tmp_path / "b.csv.drift.json").read_bytes()
        assert d1 == d2


class TestManifest:
    def test_written_on_success(self, tmp_path):
        out = tmp_path / "p.json"
        main(["params", "--a", "2", "--b", "1", "--out", str(out)])
        man = json.loads((tmp_path / "p.json.manifest.json").read_text())
        assert man["command"] == "params"
        assert man["version"] == kt.__version__
        assert str(out) in man["outputs"]
        assert man["exit_code"] == 0

    def test_written_on_failure(self, tmp_path):
        out = tmp_path / "x.csv"
        rc = main(["crosscheck", "--a", "2", "--b", "1", "--m", "1", "--l", "2.5",
                   "--s1", "2.1", "--s2", "0.3", "--out", str(out)])
        assert rc == 1
        man = json.loads((tmp_path / "x.csv.manifest.json").read_text())
        assert man["exit_code"] == 1


class TestCheck:
    def test_default_passes(self, tmp_path):
        out = tmp_path / "check.json"
        rc = main(["check", "--a", "2", "--b", "1", "--seed", "3",
                   "--n-samples", "8", "--out", str(out)])
        assert rc == 0
        rep = json.loads(out.read_text())
        assert rep["all_pass"]
        assert set(rep["suites"]) >= {"involutivity", "bracket_ratio",
                                      "reconstruction_membership", "relation6"}

    def test_injected_f2_sign_error_fails_bracket_suite(self, tmp_path):
        out = tmp_path / "bad.json"
        rc = main(["check", "--a", "2", "--b", "1", "--seed", "3",
                   "--n-samples", "6", "--inject", "f2_term_sign", "--out", str(out)])
        assert rc == 1
        rep = json.loads(out.read_text())
        assert not rep["suites"]["bracket_ratio"]["pass"]

    def test_zero_samples_trivially_passes(self, tmp_path, capsys):
        rc = main(["check", "--a", "2", "--b", "1", "--n-samples", "0",
                   "--out", str(tmp_path / "empty.json")])
        assert rc == 0
        assert "warning" in capsys.readouterr().err


class TestCrosscheck:
    def test_oscillating_point(self, tmp_path):
        out = tmp_path / "cc.csv"
        rc = main(["crosscheck", "--a", "2", "--b", "1", "--m", "1", "--l", "3.5",
                   "--s1", "2.1", "--s2", "0.3", "--periods", "3", "--out", str(out)])
        assert rc == 0
        summary = json.loads((tmp_path / "cc.csv.summary.json").read_text())
        assert summary["max_ds1"] < 1e-6
        assert summary["max_ds2"] < 1e-6
        header, rows = read_csv(out)
        assert header == ["t", "s1_full", "s1_sep", "s2_full", "s2_sep", "delta"]
        assert all(float(row[5]) < 1e-6 for row in rows)

    def test_non_admissible_exit_1(self, capsys):
        rc = main(["crosscheck", "--a", "2", "--b", "1", "--m", "1", "--l", "2.5",
                   "--s1", "2.1", "--s2", "0.3"])
        assert rc == 1
        assert "s1 interval empty" in capsys.readouterr().err

    def test_equilibrium_constants_constant_columns(self, tmp_path):
        out = tmp_path / "eq.csv"
        rc = main(["crosscheck", "--a", "2", "--b", "1",
                   "--m", str(1 / 3), "--l", str(1 / 3), "--s1", "2", "--s2", "-1",
                   "--t-end", "4", "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        for row in rows:
            assert float(row[1]) == pytest.approx(2.0, abs=1e-9)
            assert float(row[3]) == pytest.approx(-1.0, abs=1e-9)


class TestBifurcation:
    def test_coarse_grid_matches_hand_classification(self, tmp_path):
        out = tmp_path / "grid.csv"
        rc = main(["bifurcation", "--a", "2", "--b", "1",
                   "--m-min", "1", "--m-max", "1", "--l-min", "2.5", "--l-max", "3.5",
                   "--resolution", "2", "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header == ["m", "l", "n_s1", "n_s2", "admissible", "on_set", "lines_active"]
        by_l = {float(r[1]): r for r in rows}
        assert by_l[2.5][2:5] == ["0", "1", "0"]
        assert by_l[3.5][2:5] == ["1", "1", "1"]

    def test_grid_containing_equilibrium_point(self, tmp_path):
        out = tmp_path / "eq.csv"
        rc = main(["bifurcation", "--a", "2", "--b", "1",
                   "--m-min", str(1 / 3), "--m-max", str(1 / 3),
                   "--l-min", str(1 / 3), "--l-max", str(1 / 3),
                   "--resolution", "1", "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        assert rows[0][5] == "1"
        assert "l=+2ma-1" in rows[0][6] and "l=-2mb+1" in rows[0][6]

    def test_empty_range_header_only(self, tmp_path):
        out = tmp_path / "empty.csv"
        rc = main(["bifurcation", "--a", "2", "--b", "1",
                   "--m-min", "1", "--m-max", "0", "--l-min", "0", "--l-max", "1",
                   "--resolution", "3", "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header[0] == "m" and rows == []


class TestPeriod:
    @pytest.mark.parametrize("which", ["s1", "s2"])
    def test_rel_diff_small(self, tmp_path, which):
        out = tmp_path / f"{which}.json"
        rc = main(["period", "--a", "2", "--b", "1", "--m", "1", "--l", "3.5",
                   "--which", which, "--out", str(out)])
        assert rc == 0
        data = json.loads(out.read_text())
        assert data["rel_diff"] < 1e-8
        assert math.isfinite(data["period_closed_form"])

    def test_degenerate_exit_1(self, tmp_path, capsys):
        rc = main(["period", "--a", "2", "--b", "1",
                   "--m", str(1 / 3), "--l", str(1 / 3), "--which", "s1",
                   "--out", str(tmp_path / "deg.json")])
        assert rc == 1
        data = json.loads((tmp_path / "deg.json").read_text())
        assert data["degenerate"] is True
