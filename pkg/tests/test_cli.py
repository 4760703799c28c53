"""Tests for the command-line entry point and its exit codes."""

import csv

import pytest

from mpr_sampling import cli

SMALL_GAMMA_SWEEP = """\
sweep:
  grid: [0.1, 0.5, 0.9]
solver: {resolution: 21, refine_rounds: 1, tdma_resolution: 21}
"""

SMALL_VALIDATE = """\
solvers: [random]
sim: {horizon: 100000, warmup: 1000, batches: 20}
"""

OVER_BUDGET_POLICY = """\
policies:
  - label: greedy
    policy_1: {silent: 0.0, sample_1: 1.0, sample_2: 0.0}
    policy_2: {silent: 1.0, sample_1: 0.0, sample_2: 0.0}
"""


def write(path, text):
    path.write_text(text)
    return path


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestParser:
    def test_subcommands(self):
        args = cli.build_parser().parse_args(["solve", "--out", "x.csv", "--seed", "3"])
        assert args.command == "solve"
        assert args.seed == 3

    def test_command_required(self):
        with pytest.raises(SystemExit):
            cli.build_parser().parse_args([])


class TestExitCodes:
    def test_rte_curves_ok(self, tmp_path, capsys):
        out = tmp_path / "rte.csv"
        assert cli.main(["rte-curves", "--out", str(out)]) == cli.EXIT_OK
        rows = read_rows(out)
        assert rows[0] == ["alpha", "beta", "q", "rte", "rte_limit"]
        assert len(rows) == 1 + 500
        assert "500 rows" in capsys.readouterr().out

    def test_missing_config(self, tmp_path):
        code = cli.main(["gamma-sweep", "--config", str(tmp_path / "missing.yaml"), "--out", str(tmp_path / "g.csv")])
        assert code == cli.EXIT_CONFIG_ERROR

    def test_invalid_config(self, tmp_path, capsys):
        config = write(tmp_path / "bad.yaml", "sweep:\n  grid: [0.5, 0.2]\n")
        code = cli.main(["gamma-sweep", "--config", str(config), "--out", str(tmp_path / "g.csv")])
        assert code == cli.EXIT_CONFIG_ERROR
        assert "error:" in capsys.readouterr().err
        assert not (tmp_path / "g.csv").exists()

    def test_validation_passes(self, tmp_path):
        config = write(tmp_path / "validate.yaml", SMALL_VALIDATE)
        out = tmp_path / "validate.csv"
        assert cli.main(["validate", "--config", str(config), "--out", str(out), "--seed", "9"]) == cli.EXIT_OK
        rows = read_rows(out)
        assert rows[0][-1] == "status"
        assert all(row[-1] in ("pass", "skipped") for row in rows[1:])

    def test_validation_failure(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("MPR_VALIDATION_Z_THRESHOLD", "1e-9")
        config = write(tmp_path / "validate.yaml", SMALL_VALIDATE)
        code = cli.main(["validate", "--config", str(config), "--out", str(tmp_path / "v.csv")])
        assert code == cli.EXIT_VALIDATION_FAILED
        assert "FAIL random" in capsys.readouterr().out

    def test_named_policy_over_budget(self, tmp_path, capsys):
        config = write(tmp_path / "validate.yaml", SMALL_VALIDATE + OVER_BUDGET_POLICY)
        code = cli.main(["validate", "--config", str(config), "--out", str(tmp_path / "v.csv")])
        assert code == cli.EXIT_CONFIG_ERROR
        assert "exceeds its sampling budget" in capsys.readouterr().err
        assert not (tmp_path / "v.csv").exists()


class TestOutputs:
    def test_gamma_sweep_is_reproducible(self, tmp_path):
        config = write(tmp_path / "gamma.yaml", SMALL_GAMMA_SWEEP)
        first, second = tmp_path / "first.csv", tmp_path / "second.csv"
        assert cli.main(["gamma-sweep", "--config", str(config), "--out", str(first), "--seed", "1"]) == 0
        assert cli.main(["gamma-sweep", "--config", str(config), "--out", str(second), "--seed", "1"]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_solve_marks_one_row(self, tmp_path, configs_dir, capsys):
        out = tmp_path / "solve.csv"
        assert cli.main(["solve", "--config", str(configs_dir / "solve.yaml"), "--out", str(out)]) == 0
        rows = read_rows(out)
        selected = [row for row in rows[1:] if row[-1]]
        assert len(selected) == 1
        assert selected[0][-1] == "GlobalByTheorem1"
        assert "selected vertex_" in capsys.readouterr().out

    def test_default_output_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("MPR_OUTPUT_DIR", str(tmp_path / "results"))
        assert cli.main(["rte-curves"]) == 0
        assert (tmp_path / "results" / "rte_curves.csv").exists()
