import json

import numpy as np
import pytest

from qgemsim.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = main(list(argv) + ["--out", str(out)])
    text = out.read_text() if out.exists() else ""
    return code, text


def parse_csv(text):
    lines = text.strip().split("\n")
    assert lines[0].startswith("# ")
    header = json.loads(lines[0][2:])
    columns = lines[1].split(",")
    rows = [dict(zip(columns, line.split(","))) for line in lines[2:]]
    return header, columns, rows


class TestEntropySweep:
    def test_basic_run(self, tmp_path):
        code, text = run(tmp_path, "entropy-sweep", "--n", "3",
                         "--tau-grid", "0:5:6")
        assert code == 0
        header, columns, rows = parse_csv(text)
        assert columns == ["setup", "n", "subsystem", "tau_s", "entropy_bits"]
        assert header["command"] == "entropy-sweep"
        assert len(rows) == 6 * 3
        # tau = 0 rows carry zero entropy
        for row in rows:
            if float(row["tau_s"]) == 0.0:
                assert float(row["entropy_bits"]) == 0.0
        # middle particle strictly above the outer ones at late times
        late = {row["subsystem"]: float(row["entropy_bits"])
                for row in rows if float(row["tau_s"]) == 5.0}
        assert late["2"] > late["1"]
        assert late["1"] == pytest.approx(late["3"], abs=1e-10)

    def test_star_symmetric(self, tmp_path):
        code, text = run(tmp_path, "entropy-sweep", "--setup", "star", "--n", "3",
                         "--tau-grid", "2.5:2.5:1")
        assert code == 0
        _, _, rows = parse_csv(text)
        values = {float(r["entropy_bits"]) for r in rows}
        assert max(values) - min(values) < 1e-10


class TestWitnessSweep:
    def test_negative_window(self, tmp_path):
        # at 0.15 Hz certification is only viable up to roughly 4 seconds:
        # the rebuilt witness stays clearly negative before that and sits at
        # the noise floor afterwards, while a witness frozen at the nominal
        # interaction point goes genuinely positive
        code, text = run(tmp_path, "witness-sweep", "--n", "3",
                         "--gamma", "0.15", "--tau-grid", "0.5:5:10")
        assert code == 0
        _, _, rows = parse_csv(text)
        for row in rows:
            tau = float(row["tau_s"])
            value = float(row["witness_value"])
            if tau <= 3.5:
                assert value < -0.005
            if tau >= 4.5:
                assert value > -0.005
        code, text = run(tmp_path, "witness-sweep", "--n", "3",
                         "--gamma", "0.15", "--tau-grid", "0.5:5:10",
                         "--witness", "fixed", "--ref-gamma", "0.15",
                         "--ref-tau", "2.5")
        assert code == 0
        _, _, rows = parse_csv(text)
        assert float(rows[3]["witness_value"]) < 0   # tau = 2 s
        assert float(rows[-1]["witness_value"]) > 0  # tau = 5 s

    def test_two_qubits_never_negative_at_high_rate(self, tmp_path):
        code, text = run(tmp_path, "witness-sweep", "--n", "2",
                         "--gamma", "0.15", "--tau-grid", "0:5:21")
        assert code == 0
        _, _, rows = parse_csv(text)
        assert all(float(r["witness_value"]) >= -1e-12 for r in rows)

    def test_fixed_mode_upper_bounds_self_mode(self, tmp_path):
        args = ["witness-sweep", "--n", "3", "--gamma", "0.1",
                "--tau-grid", "2.5:2.5:1"]
        _, self_text = run(tmp_path, *args)
        _, fixed_text = run(tmp_path, *args + ["--witness", "fixed",
                                               "--ref-gamma", "0", "--ref-tau", "2.5"])
        self_value = float(parse_csv(self_text)[2][0]["witness_value"])
        fixed_value = float(parse_csv(fixed_text)[2][0]["witness_value"])
        assert fixed_value >= self_value - 1e-12

    def test_deterministic_output(self, tmp_path):
        args = ["witness-sweep", "--n", "3", "--gamma", "0.05",
                "--tau-grid", "0:5:11"]
        _, first = run(tmp_path, *args)
        _, second = run(tmp_path, *args)
        assert first == second


class TestMeasure:
    def test_curve_and_summary(self, tmp_path):
        code, text = run(tmp_path, "measure", "--n", "2", "--gamma", "0.05",
                         "--mode", "ungrouped", "--seeds", "2")
        assert code == 0
        header, columns, rows = parse_csv(text)
        assert columns == ["n", "D", "setup", "gamma_hz", "tau_s", "mode",
                           "total_shots", "witness_mean", "stderr", "t",
                           "confidence", "seed"]
        summary = [r for r in rows if r["seed"] == "-1"]
        assert len(summary) == 1
        assert int(summary[0]["total_shots"]) > 100
        curve = [r for r in rows if r["seed"] != "-1"]
        assert {r["seed"] for r in curve} == {"0", "1"}
        assert header["target"] == 0.999

    def test_deterministic(self, tmp_path):
        args = ["measure", "--n", "2", "--gamma", "0.05", "--mode", "ungrouped",
                "--seeds", "2"]
        _, first = run(tmp_path, *args)
        _, second = run(tmp_path, *args)
        assert first == second

    def test_not_certifiable_exit_code(self, tmp_path):
        code, _ = run(tmp_path, "measure", "--n", "2", "--gamma", "0.2",
                      "--mode", "ungrouped", "--seeds", "1")
        assert code == 3


class TestDecoEstimate:
    def test_table(self, tmp_path):
        code, text = run(tmp_path, "deco-estimate", "--te-grid", "0.1:5:25")
        assert code == 0
        _, columns, rows = parse_csv(text)
        assert columns == ["T_e_K", "lambda_air", "gamma_air_hz", "lambda_s",
                           "lambda_e", "lambda_a", "gamma_bb_hz", "gamma_total_hz"]
        totals = [float(r["gamma_total_hz"]) for r in rows]
        assert all(np.diff(totals) > 0)
        half_k = min(rows, key=lambda r: abs(float(r["T_e_K"]) - 0.5))
        assert float(half_k["gamma_total_hz"]) >= 0.05 * 0.9

    def test_grid_bounds_enforced(self, tmp_path):
        code, _ = run(tmp_path, "deco-estimate", "--te-grid", "0.001:5:10")
        assert code == 2


class TestGroupOps:
    def test_three_qubit_summary(self, tmp_path):
        out = tmp_path / "plan.json"
        code = main(["group-ops", "--n", "3", "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["summary"] == {"operators": 26, "groups": 12}
        groups = [set(g) for g in payload["group_strings"]]
        assert {"IIX", "IXX", "XII", "XXI", "XXX"} in groups

    def test_two_qubit_singletons(self, tmp_path):
        out = tmp_path / "plan.json"
        code = main(["group-ops", "--n", "2", "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["summary"] == {"operators": 4, "groups": 3}
        assert sorted(len(g) for g in payload["groups"]) == [1, 1, 1]

    def test_qudits_rejected(self, tmp_path):
        out = tmp_path / "plan.json"
        code = main(["group-ops", "--n", "2", "--d-levels", "3", "--out", str(out)])
        assert code == 2


class TestValidation:
    def test_star_with_two_particles(self, tmp_path):
        code, _ = run(tmp_path, "witness-sweep", "--setup", "star", "--n", "2",
                      "--tau-grid", "0:1:2")
        assert code == 2

    def test_bad_grid(self, tmp_path):
        code, _ = run(tmp_path, "entropy-sweep", "--tau-grid", "nonsense")
        assert code == 2

    def test_bad_subsystem(self, tmp_path):
        code, _ = run(tmp_path, "entropy-sweep", "--subsystem", "9",
                      "--tau-grid", "0:1:2")
        assert code == 2

    def test_config_file_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("kind = parallel\nn = 2\ntau = 1.0\n")
        code, text = run(tmp_path, "witness-sweep", "--n", "3",
                         "--config", str(cfg), "--tau-grid", "1:1:1")
        assert code == 0
        header, _, rows = parse_csv(text)
        assert header["n"] == 2
        assert rows[0]["n"] == "2"
