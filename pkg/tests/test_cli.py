"""
Tests for the CLI module.

Each command is driven through main() with an argv list; reports are read
back from stdout (or --out) as JSON and the exit code is checked.
"""

import csv
import json

from unittest.mock import patch

import pytest

from lllcore.cli import main


@pytest.fixture
def run_cli(capsys):
    """Run main(argv) and return (exit code, parsed stdout report or None)."""
    def run(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr().out
        return code, json.loads(out) if out.strip() else None
    return run


@pytest.fixture
def toy(data_dir):
    return data_dir / "toy_loop.json"


class TestVerify:
    def test_k4_passes(self, run_cli, data_dir):
        code, report = run_cli("verify", "--instance", data_dir / "k4_matchings.json", "--checks", "atomic,strong")
        assert code == 0
        assert report["passed"]
        assert [r["check"] for r in report["result"]["reports"]] == ["atomicity", "strong_commutativity"]
        assert report["result"]["charges"]["minimal"] == ["1/3"] * 6
        assert report["provenance"]["tool"] == "lllcore"

    def test_non_atomic_instance_fails(self, run_cli, data_dir):
        code, report = run_cli("verify", "--instance", data_dir / "variable_demo.json", "--checks", "atomic")
        assert code == 1
        assert not report["passed"]

    def test_inferred_dependency_is_reported(self, run_cli, data_dir, tmp_path):
        description = json.loads((data_dir / "toy_loop.json").read_text())
        del description["dependency"]
        path = tmp_path / "toy.json"
        path.write_text(json.dumps(description))
        code, report = run_cli("verify", "--instance", path, "--checks", "causality,psi")
        assert code == 0
        assert report["result"]["dependency"]["loops"] == [0]

    def test_missing_file(self, run_cli, tmp_path):
        code, report = run_cli("verify", "--instance", tmp_path / "absent.json")
        assert code == 2
        assert report is None

    def test_zero_measure_initial_state(self, run_cli, tmp_path):
        path = tmp_path / "point.json"
        path.write_text(json.dumps({
            "type": "variable", "n": 2, "distributions": [["1/2", "1/2"], ["1", "0"]],
            "flaws": [{"vbl": [0], "bad": [[1]]}], "initial": {"point": [1, 1]},
        }))
        code, report = run_cli("verify", "--instance", path, "--checks", "atomic")
        assert code == 2
        assert report is None

    def test_unknown_check(self, run_cli, toy):
        code, _ = run_cli("verify", "--instance", toy, "--checks", "atomic,bogus")
        assert code == 2

    def test_missing_instance_argument(self, run_cli):
        code, _ = run_cli("verify")
        assert code == 2


class TestConditions:
    def test_rainbow_closed_form(self, run_cli):
        code, report = run_cli("conditions", "--n", 20, "--q", 4)
        assert code == 0
        params = report["result"]["rainbow"]
        assert params["theta_exact"] == "14488688572801/17731584000000"
        assert params["action_size"] == 1443

    def test_shearer_file(self, run_cli, data_dir):
        code, report = run_cli("conditions", "--params", data_dir / "shearer_demo.yaml")
        assert code == 0
        assert report["result"]["shearer"]["passed"]
        assert report["result"]["shearer"]["q_empty"] == pytest.approx(0.2)

    def test_toy_certificate_and_bounds(self, run_cli, toy, data_dir):
        code, report = run_cli("conditions", "--instance", toy, "--params", data_dir / "params_toy.yaml")
        assert code == 0
        result = report["result"]
        assert result["cluster"]["theta"] == 0.75
        assert result["theta"] == "3/4"
        assert result["bounds"]["seq_c"]["T"] == pytest.approx(1.4094, abs=1e-4)
        assert set(result["bounds"]) == {"seq_a", "seq_b", "seq_c", "par"}

    def test_minimal_charges(self, run_cli, toy, data_dir):
        code, report = run_cli("conditions", "--instance", toy, "--params", data_dir / "params_minimal.yaml",
                               "--variant", "seq_c")
        assert code == 0
        assert report["result"]["lambda"] == ["1/4"]
        assert list(report["result"]["bounds"]) == ["seq_c"]

    def test_no_certificate(self, run_cli, toy, tmp_path):
        params = tmp_path / "params.yaml"
        params.write_text('mode: cluster\nlambda: ["1"]\nmu: ["1/2"]\n')
        code, report = run_cli("conditions", "--instance", toy, "--params", params)
        assert code == 1
        assert not report["result"]["certificate"]
        assert report["result"]["bounds"] == {}

    def test_needs_a_dependency(self, run_cli, tmp_path):
        params = tmp_path / "params.yaml"
        params.write_text('lambda: ["1/4"]\nmu: ["1/2"]\n')
        code, _ = run_cli("conditions", "--params", params)
        assert code == 2


class TestRun:
    def test_json_rows(self, run_cli, toy):
        code, report = run_cli("run", "--instance", toy, "--trials", 20, "--seed", 4)
        assert code == 0
        rows = report["result"]["trials"]
        assert len(rows) == 20
        assert all(row["terminated"] for row in rows)
        assert report["provenance"]["seeds"] == [row["seed"] for row in rows]

    def test_seeded_runs_repeat(self, run_cli, toy):
        _, first = run_cli("run", "--instance", toy, "--trials", 10, "--seed", 9, "--strategy", "uniform_random")
        _, second = run_cli("run", "--instance", toy, "--trials", 10, "--seed", 9, "--strategy", "uniform_random")
        assert first == second

    def test_csv_needs_a_path(self, run_cli, toy):
        code, _ = run_cli("run", "--instance", toy, "--trials", 3, "--format", "csv")
        assert code == 2

    def test_csv_rows(self, run_cli, toy, tmp_path):
        path = tmp_path / "trials.csv"
        code, report = run_cli("run", "--instance", toy, "--trials", 5, "--format", "csv", "--csv", path)
        assert code == 0
        assert report["result"]["csv"] == str(path)
        with path.open(newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert [row["trial"] for row in rows] == ["0", "1", "2", "3", "4"]

    def test_parallel_rounds(self, run_cli, toy):
        code, report = run_cli("run", "--instance", toy, "--trials", 5, "--parallel")
        assert code == 0
        assert all(row["rounds"] is not None for row in report["result"]["trials"])

    def test_bound_from_params(self, run_cli, toy, data_dir):
        code, report = run_cli("run", "--instance", toy, "--trials", 50, "--params", data_dir / "params_toy.yaml")
        assert code == 0
        assert report["result"]["bound"]["variant"] == "seq_c"
        assert report["result"]["summary"]["tail"]

    def test_no_certificate_needs_force(self, run_cli, toy, tmp_path):
        params = tmp_path / "params.yaml"
        params.write_text('lambda: ["1"]\nmu: ["1/2"]\n')
        code, _ = run_cli("run", "--instance", toy, "--trials", 2, "--params", params)
        assert code == 1
        code, report = run_cli("run", "--instance", toy, "--trials", 2, "--params", params, "--force")
        assert code == 0
        assert "bound" not in report["result"]

    def test_rainbow_run(self, run_cli, data_dir):
        code, report = run_cli("run", "--rainbow", data_dir / "rainbow_k4.json", "--trials", 4, "--force")
        assert code == 0
        assert report["result"]["summary"]["all_rainbow"]


class TestStable:
    def test_counting(self, run_cli, toy, data_dir):
        code, report = run_cli("stable", "--task", "counting", "--instance", toy,
                               "--params", data_dir / "params_toy.yaml", "--t", 1, "--max-len", 3)
        assert code == 0
        roots = [r["root"] for r in report["result"]["reports"]]
        assert roots == [[], [0]]

    def test_counting_single_root(self, run_cli, data_dir):
        code, report = run_cli("stable", "--params", data_dir / "shearer_demo.yaml", "--root", "0", "--t", 1,
                               "--max-len", 3)
        assert code == 0
        assert len(report["result"]["reports"]) == 1

    def test_bad_audit(self, run_cli, data_dir):
        code, report = run_cli("stable", "--task", "bad-audit", "--instance", data_dir / "k4_matchings.json",
                               "--t", 2, "--strategy", "pi_stable")
        assert code == 0
        assert report["result"]["walk_count"] == 27
        assert report["result"]["mass"] == 1

    def test_backward_audit(self, run_cli, data_dir):
        code, report = run_cli("stable", "--task", "backward-audit", "--instance", data_dir / "k4_matchings.json",
                               "--t", 2, "--strategy", "pi_stable")
        assert code == 0
        assert report["result"]["audit"]["passed"]

    def test_walk_cap_from_environment(self, run_cli, data_dir, monkeypatch):
        monkeypatch.setenv("LLLCORE_MAX_WALKS", "5")
        code, report = run_cli("stable", "--task", "bad-audit", "--instance", data_dir / "k4_matchings.json",
                               "--t", 3, "--strategy", "pi_stable")
        assert code == 3
        assert report is None


class TestRainbowGen:
    def test_writes_coloring(self, run_cli, tmp_path):
        coloring = tmp_path / "coloring.json"
        code, report = run_cli("rainbow-gen", "--n", 3, "--q", 2, "--seed", 1, "--coloring-out", coloring)
        assert code == 0
        assert report["result"]["coloring"] == str(coloring)
        saved = json.loads(coloring.read_text())
        assert saved["n"] == 3 and len(saved["edges"]) == 15

    def test_report_to_file(self, run_cli, tmp_path):
        out = tmp_path / "report.json"
        code, report = run_cli("rainbow-gen", "--n", 3, "--q", 2, "--out", out)
        assert code == 0
        assert report is None
        written = json.loads(out.read_text())
        assert written["result"]["params"]["n"] == 3
        assert written["provenance"]["seeds"] == [0]

    def test_needs_n_and_q(self, run_cli):
        code, _ = run_cli("rainbow-gen", "--n", 3)
        assert code == 2


def test_invalid_command():
    with pytest.raises(SystemExit):
        main(["bogus"])


def test_reads_sys_argv(capsys):
    with patch("sys.argv", ["lllcore", "rainbow-gen", "--n", "3", "--q", "2"]):
        assert main() == 0
    assert json.loads(capsys.readouterr().out)["command"] == "rainbow-gen"


def test_negative_seed(run_cli, data_dir):
    code, report = run_cli("run", "--instance", data_dir / "toy_loop.json", "--seed", -1)
    assert code == 2
    assert report is None
