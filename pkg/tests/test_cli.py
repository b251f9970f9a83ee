import json
import math

import pytest

from majlab.cli import EXIT_INVALID, EXIT_OK, EXIT_THRESHOLD, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestDiffDist:
    def test_pmf_output(self, capsys):
        code, out, _ = run_cli(capsys, "diff-dist", "--n", "2", "--m", "2",
                               "--p", "0.5")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert math.fsum(payload["pmf"]) == pytest.approx(1.0, abs=1e-12)
        assert len(payload["pmf"]) == 5


class TestSolveAlpha:
    def test_feasibility_mode(self, capsys):
        code, out, _ = run_cli(capsys, "solve-alpha", "--delta", "0.499",
                               "--eps", "1e-10", "--alpha", "0.85")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["feasible"]
        assert payload["sup_value"] <= 0.25 - 1e-10

    def test_min_alpha_mode(self, capsys):
        code, out, _ = run_cli(capsys, "solve-alpha", "--delta", "0.499",
                               "--eps", "1e-10")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["alpha_star"] <= 0.85

    def test_invalid_inputs(self, capsys):
        code, _, err = run_cli(capsys, "solve-alpha", "--delta", "1.5",
                               "--eps", "1e-10")
        assert code == EXIT_INVALID
        assert "error:" in err


class TestSampleDynamics:
    def test_trajectory_output(self, capsys, tmp_path):
        out_path = tmp_path / "traj.json"
        code, out, _ = run_cli(capsys, "sample-dynamics", "--n", "40",
                               "--p", "0.4", "--r0", "25", "--seed", "3",
                               "--out", str(out_path))
        assert code == EXIT_OK
        payload = json.loads(out_path.read_text())
        assert payload["steps"][0]["red_count"] == 25
        assert payload["outcome"] in (
            "unanimous_red", "unanimous_blue", "two_cycle", "step_cap"
        )

    def test_edge_list_export(self, capsys, tmp_path):
        edges = tmp_path / "edges.txt"
        code, _, _ = run_cli(capsys, "sample-dynamics", "--n", "20",
                             "--p", "0.5", "--r0", "10", "--seed", "1",
                             "--edges-out", str(edges))
        assert code == EXIT_OK
        lines = edges.read_text().splitlines()
        assert all(len(line.split()) == 2 for line in lines)


class TestExperimentCommands:
    def test_clt_threshold_pass_and_fail(self, capsys):
        args = ["clt-experiment", "--n", "80", "--p", "0.5", "--r0", "40",
                "--trials", "40", "--seed", "1"]
        code, _, _ = run_cli(capsys, *args, "--check-variance-band",
                             "0.01", "100.0")
        assert code == EXIT_OK
        code, _, err = run_cli(capsys, *args, "--check-variance-band",
                               "99.0", "100.0")
        assert code == EXIT_THRESHOLD
        assert "THRESHOLD FAILED" in err

    def test_missing_required_option(self, capsys):
        code, _, err = run_cli(capsys, "clt-experiment", "--trials", "5")
        assert code == EXIT_INVALID
        assert "missing required option" in err

    def test_config_file_merging(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 60, "p": 0.5, "r0": 30, "trials": 10}))
        code, out, _ = run_cli(capsys, "clt-experiment", "--config", str(cfg),
                               "--seed", "2")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["config"]["n"] == 60
        assert payload["config"]["trials"] == 10

    def test_cli_flag_overrides_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 60, "p": 0.5, "r0": 30}))
        code, out, _ = run_cli(capsys, "clt-experiment", "--config", str(cfg),
                               "--n", "50", "--r0", "25", "--trials", "5")
        assert code == EXIT_OK
        assert json.loads(out)["config"]["n"] == 50

    def test_bad_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "broken.json"
        cfg.write_text("{not json")
        code, _, err = run_cli(capsys, "clt-experiment", "--config", str(cfg))
        assert code == EXIT_INVALID

    def test_out_writes_record(self, capsys, tmp_path):
        out_path = tmp_path / "swing.json"
        code, _, _ = run_cli(capsys, "swing-experiment", "--m", "100",
                             "--x", "1", "--p", "0.5", "--trials", "10",
                             "--seed", "4", "--out", str(out_path))
        assert code == EXIT_OK
        payload = json.loads(out_path.read_text())
        assert payload["kind"] == "swing"
        assert (tmp_path / "swing.csv").exists()

    def test_prop_threshold(self, capsys):
        code, _, _ = run_cli(capsys, "prop-experiment", "--n", "200",
                             "--p", "0.5", "--alpha", "0.85",
                             "--delta-frac", "0.499", "--trials", "10",
                             "--seed", "2", "--max-failures", "0")
        assert code == EXIT_OK

    def test_verify_fourier(self, capsys):
        code, out, _ = run_cli(capsys, "verify-fourier", "--r0", "2",
                               "--b0", "2", "--p", "0.5", "--k", "2")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["basis_checks"]["off_star_gap"] <= 1e-12
        assert len(payload["moments"]) == 2
