"""Tests for the sweep runners, the validation harness and experiment files."""

import math

import pytest

from mpr_sampling import experiments, optimizer
from mpr_sampling.errors import ConfigurationError
from mpr_sampling.schemas.experiment import (
    ExperimentKind,
    ExperimentSpec,
    ResultTable,
    ValidationReport,
    default_grid,
    load_experiment,
)
from mpr_sampling.schemas.scenario import Certificate, Scenario
from mpr_sampling.schemas.simulation import SimResult
from mpr_sampling.schemas.source import SourceParams

FAST_SOLVER = {"resolution": 21, "refine_rounds": 1, "tdma_resolution": 21}
BASELINE_COLUMNS = ("E_random", "E_greedy1", "E_greedy2", "E_tdma")


def column(table, name):
    k = table.columns.index(name)
    return [row[k] for row in table.rows]


def row_at(table, x):
    return next(row for row in table.rows if row[0] == pytest.approx(x))


@pytest.fixture(scope="module")
def gamma_table():
    return experiments.run_gamma_sweep(ExperimentSpec(kind=ExperimentKind.GAMMA_SWEEP))


@pytest.fixture(scope="module")
def weight_table():
    return experiments.run_weight_sweep(ExperimentSpec(kind=ExperimentKind.WEIGHT_SWEEP))


class TestExperimentSpec:
    def test_default_grids(self):
        gammas = default_grid(ExperimentKind.GAMMA_SWEEP)
        assert gammas[0] == 0.01 and gammas[1] == 0.05 and gammas[-1] == 0.95
        assert len(gammas) == 20
        assert default_grid(ExperimentKind.WEIGHT_SWEEP)[-1] == 1.0
        assert len(default_grid(ExperimentKind.RTE_CURVES)) == 100

    def test_range_sweep(self):
        spec = ExperimentSpec(kind=ExperimentKind.GAMMA_SWEEP, sweep={"start": 0.1, "stop": 0.3, "step": 0.1})
        assert spec.sweep_grid == [0.1, 0.2, 0.3]

    def test_weight_sweep_defaults(self):
        spec = ExperimentSpec(kind=ExperimentKind.WEIGHT_SWEEP)
        assert spec.scenario.source_1.beta == 0.1
        assert spec.scenario.budget.gamma_1 == 0.9

    @pytest.mark.parametrize(
        "kind,grid",
        [
            (ExperimentKind.GAMMA_SWEEP, []),
            (ExperimentKind.GAMMA_SWEEP, [0.5, 0.4]),
            (ExperimentKind.GAMMA_SWEEP, [0.0, 0.5]),
            (ExperimentKind.RTE_CURVES, [0.5, 1.2]),
            (ExperimentKind.WEIGHT_SWEEP, [-0.1, 0.5]),
        ],
    )
    def test_rejects_bad_grid(self, kind, grid):
        with pytest.raises(ValueError):
            ExperimentSpec(kind=kind, sweep_grid=grid)

    def test_rejects_unknown_solver(self):
        with pytest.raises(ValueError):
            ExperimentSpec(kind=ExperimentKind.GAMMA_SWEEP, solvers=["optimized", "aloha"])

    def test_rejects_named_policy_over_budget(self):
        pair = {
            "label": "greedy",
            "policy_1": {"silent": 0.4, "sample_1": 0.6, "sample_2": 0.0},
            "policy_2": {"silent": 1.0, "sample_1": 0.0, "sample_2": 0.0},
        }
        with pytest.raises(ValueError, match="sensor 1 exceeds"):
            ExperimentSpec(kind=ExperimentKind.VALIDATE, policies=[pair])
        relaxed = {"gamma_1": 0.6, "gamma_2": 0.5}
        spec = ExperimentSpec(kind=ExperimentKind.VALIDATE, scenario={"budget": relaxed}, policies=[pair])
        assert spec.policies[0].label == "greedy"

    def test_with_seed_keeps_other_overrides(self):
        spec = ExperimentSpec(kind=ExperimentKind.VALIDATE, sim={"horizon": 5000})
        seeded = spec.with_seed(42)
        assert seeded.sim.seed == 42
        assert seeded.sim.horizon == 5000


class TestLoadExperiment:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_experiment(tmp_path / "nope.yaml", ExperimentKind.GAMMA_SWEEP)

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("scenario: [unclosed\n")
        with pytest.raises(ConfigurationError):
            load_experiment(path, ExperimentKind.GAMMA_SWEEP)

    def test_kind_mismatch(self, tmp_path):
        path = tmp_path / "kind.yaml"
        path.write_text("kind: WeightSweep\n")
        with pytest.raises(ConfigurationError):
            load_experiment(path, ExperimentKind.GAMMA_SWEEP)

    def test_schema_violation(self, tmp_path):
        path = tmp_path / "alpha.yaml"
        path.write_text("scenario:\n  source_1: {alpha: 1.5, beta: 0.2}\n")
        with pytest.raises(ConfigurationError):
            load_experiment(path, ExperimentKind.GAMMA_SWEEP)

    def test_none_gives_defaults(self):
        spec = load_experiment(None, ExperimentKind.GAMMA_SWEEP)
        assert spec.scenario == Scenario()
        assert spec.output_path is None

    @pytest.mark.parametrize(
        "name,kind",
        [
            ("rte_curves.yaml", ExperimentKind.RTE_CURVES),
            ("gamma_sweep.yaml", ExperimentKind.GAMMA_SWEEP),
            ("weight_sweep.yaml", ExperimentKind.WEIGHT_SWEEP),
            ("validate.yaml", ExperimentKind.VALIDATE),
            ("solve.yaml", ExperimentKind.SOLVE),
        ],
    )
    def test_shipped_configs_load(self, configs_dir, name, kind):
        spec = load_experiment(configs_dir / name, kind)
        assert spec.kind == kind
        assert spec.output_path is not None


class TestRteCurves:
    def test_values(self):
        table = experiments.run_rte_curves(ExperimentSpec(kind=ExperimentKind.RTE_CURVES))
        assert len(table.rows) == 5 * 100
        assert row_at_curve(table, 0.5, 0.5, 1.0)[3] == 0.0
        assert row_at_curve(table, 0.8, 0.6, 0.5)[3] == pytest.approx(0.285714, abs=1e-6)
        assert row_at_curve(table, 0.3, 0.2, 0.01)[4] == pytest.approx(0.48, abs=1e-12)

    def test_denser_grid_agrees_at_shared_points(self):
        coarse = experiments.run_rte_curves(
            ExperimentSpec(kind=ExperimentKind.RTE_CURVES, sweep_grid=[0.2, 0.6], curves=[(0.8, 0.6)])
        )
        dense = experiments.run_rte_curves(
            ExperimentSpec(kind=ExperimentKind.RTE_CURVES, sweep_grid=[0.2, 0.4, 0.6], curves=[(0.8, 0.6)])
        )
        assert coarse.rows == [dense.rows[0], dense.rows[2]]


def row_at_curve(table, alpha, beta, q):
    return next(r for r in table.rows if r[0] == alpha and r[1] == beta and r[2] == pytest.approx(q))


@pytest.mark.slow
class TestGammaSweep:
    def test_columns(self, gamma_table):
        assert gamma_table.columns == ["gamma", "E_optimized", *BASELINE_COLUMNS]
        assert len(gamma_table.rows) == 20

    def test_every_policy_nonincreasing_in_budget(self, gamma_table):
        for name in gamma_table.columns[1:]:
            values = column(gamma_table, name)
            assert all(b <= a + 1e-6 for a, b in zip(values, values[1:])), name

    def test_optimized_beats_mpr_baselines(self, gamma_table):
        for row in gamma_table.rows:
            best = row[1]
            for name in ("E_random", "E_greedy1", "E_greedy2"):
                assert best <= row[gamma_table.columns.index(name)] + 1e-12

    def test_tdma_crossover(self, gamma_table):
        crossover = experiments.tdma_crossover(gamma_table)
        assert crossover is not None and 0.01 < crossover < 0.95
        opt, tdma = column(gamma_table, "E_optimized"), column(gamma_table, "E_tdma")
        for gamma, e_opt, e_tdma in zip(column(gamma_table, "gamma"), opt, tdma):
            if gamma < crossover:
                assert e_tdma <= e_opt + 1e-9
            else:
                assert e_opt <= e_tdma

    def test_all_values_finite_and_bounded(self, gamma_table):
        for row in gamma_table.rows:
            assert all(0.0 <= v <= 1.0 for v in row[1:])


@pytest.mark.slow
class TestWeightSweep:
    def test_optimized_matches_greedy1_at_zero_weight(self, weight_table):
        row = row_at(weight_table, 0.0)
        assert abs(row[1] - row[weight_table.columns.index("E_greedy1")]) <= 1e-6

    def test_optimized_beats_every_baseline(self, weight_table):
        for row in weight_table.rows:
            for name in BASELINE_COLUMNS:
                assert row[1] <= row[weight_table.columns.index(name)] + 1e-12

    def test_greedy_band_violations_sit_near_greedy_crossover(self, weight_table):
        g1, g2 = column(weight_table, "E_greedy1"), column(weight_table, "E_greedy2")
        w = column(weight_table, "w2")
        k = next(i for i in range(len(w)) if g1[i] >= g2[i])
        # linear interpolation of where the two greedy curves meet
        d0, d1 = g1[k - 1] - g2[k - 1], g1[k] - g2[k]
        meet = w[k - 1] + (w[k] - w[k - 1]) * d0 / (d0 - d1)
        outside = experiments.greedy_band_violations(weight_table)
        assert 0.0 not in outside and 1.0 not in outside
        assert all(abs(v - meet) <= 0.25 for v in outside)


class TestTableHelpers:
    def test_tdma_crossover_none_when_tdma_wins_at_the_end(self):
        table = ResultTable(columns=["gamma", "E_optimized", "E_tdma"], rows=[[0.1, 0.5, 0.6], [0.2, 0.5, 0.4]])
        assert experiments.tdma_crossover(table) is None

    def test_tdma_crossover_last_switch(self):
        table = ResultTable(
            columns=["gamma", "E_optimized", "E_tdma"],
            rows=[[0.1, 0.4, 0.5], [0.2, 0.5, 0.4], [0.3, 0.3, 0.4], [0.4, 0.2, 0.4]],
        )
        assert experiments.tdma_crossover(table) == 0.3

    def test_band_violations(self):
        table = ResultTable(
            columns=["w2", "E_greedy1", "E_greedy2", "E_tdma"],
            rows=[[0.0, 0.1, 0.3, 0.2], [0.5, 0.2, 0.2, 0.1], [1.0, 0.3, 0.1, 0.35]],
        )
        assert experiments.greedy_band_violations(table) == [0.5, 1.0]

    def test_format_cell(self):
        assert experiments.format_cell(2.0 / 7.0) == "0.285714285714"
        assert experiments.format_cell(0.0) == "0"
        assert experiments.format_cell("BestFound") == "BestFound"


class TestSolveTable:
    def test_vertex_regime(self):
        spec = ExperimentSpec(
            kind=ExperimentKind.SOLVE,
            scenario=Scenario().copy(update={"source_2": SourceParams(alpha=0.7, beta=0.5, weight=0.5)}),
        )
        table = experiments.run_solve(spec)
        assert len(table.rows) == 9
        selected = [row for row in table.rows if row[-1]]
        assert len(selected) == 1
        assert selected[0][-1] == Certificate.GLOBAL_BY_THEOREM.value
        assert selected[0][-2] == min(row[-2] for row in table.rows)

    def test_grid_row_outside_vertex_regime(self):
        spec = ExperimentSpec(kind=ExperimentKind.SOLVE, solver=FAST_SOLVER)
        table = experiments.run_solve(spec)
        assert len(table.rows) == 10
        assert table.rows[-1][0] == "grid"
        assert table.rows[-1][-1] == Certificate.BEST_FOUND.value
        assert not any(row[-1] for row in table.rows[:-1])


class TestDeterminism:
    def test_byte_identical_csv(self, tmp_path):
        spec = ExperimentSpec(kind=ExperimentKind.GAMMA_SWEEP, sweep_grid=[0.1, 0.5, 0.9], solver=FAST_SOLVER)
        first = experiments.write_csv(experiments.run_gamma_sweep(spec), tmp_path / "a" / "gamma.csv")
        second = experiments.write_csv(experiments.run_gamma_sweep(spec), tmp_path / "b" / "gamma.csv")
        assert first.read_bytes() == second.read_bytes()
        lines = first.read_text().splitlines()
        assert lines[0] == "gamma,E_optimized,E_random,E_greedy1,E_greedy2,E_tdma"
        assert len(lines) == 4


class TestValidate:
    @pytest.fixture
    def spec(self):
        return ExperimentSpec(
            kind=ExperimentKind.VALIDATE,
            solvers=["random", "greedy1"],
            policies=[
                {
                    "label": "silent",
                    "policy_1": {"silent": 1.0, "sample_1": 0.0, "sample_2": 0.0},
                    "policy_2": {"silent": 1.0, "sample_1": 0.0, "sample_2": 0.0},
                }
            ],
            sim={"horizon": 200_000, "warmup": 2_000, "batches": 50, "seed": 5},
        )

    def test_report(self, spec):
        report = experiments.run_validate(spec)
        assert report.excluded == ["silent"]
        assert [r.label for r in report.results] == ["random", "greedy1"]
        assert len(report.rows) == 2 * 6
        assert report.passed

    def test_never_updated_source_is_skipped(self, spec):
        report = experiments.run_validate(spec)
        greedy_2 = {r.metric: r for r in report.rows if r.label == "greedy1" and r.source == 2}
        assert greedy_2["q"].status == "pass"
        assert greedy_2["q"].empirical == 0.0
        assert greedy_2["rte"].status == "skipped"
        assert greedy_2["cae"].status == "skipped"

    def test_consecutive_seeds(self, spec):
        report = experiments.run_validate(spec)
        assert [r.simulation.seed for r in report.results] == [5, 6]

    def test_table(self, spec):
        table = experiments.validation_table(experiments.run_validate(spec))
        assert table.columns[-1] == "status"
        assert len(table.rows) == 12


class TestZScore:
    def test_zero_spread_is_clamped(self):
        assert experiments._z(0.3, 0.3, 0.0) == 0.0
        assert experiments._z(0.31, 0.3, 0.0) == experiments.Z_LIMIT
        assert experiments._z(0.29, 0.3, 0.0) == -experiments.Z_LIMIT
        assert experiments._z(1.0, 0.0, 1e-300) == experiments.Z_LIMIT
        assert experiments._z(0.5, 0.3, 0.1) == pytest.approx(2.0)

    def test_zero_spread_miss_fails_with_finite_z(self):
        s = Scenario()
        solution = optimizer.baseline_random(s)
        result = experiments.scenario_result("random", s, solution)
        fields = dict.fromkeys(SimResult.__fields__, 0.01)
        for i in (1, 2):
            fields[f"empirical_q_{i}"] = getattr(solution.update_probs, f"q_{i}")
            fields[f"empirical_rte_{i}"] = getattr(solution, f"rte_{i}")
            fields[f"empirical_cae_{i}"] = getattr(result, f"cae_{i}")
        fields["empirical_q_1"] += 0.01
        fields["std_err_q_1"] = 0.0
        fields.update(slots_measured=1000, seed=0)
        sim = SimResult(**fields)

        rows = experiments._validation_rows("random", result, sim, threshold=1e9)
        by_key = {(r.source, r.metric): r for r in rows}
        assert by_key[(1, "q")].z == experiments.Z_LIMIT
        assert by_key[(1, "q")].status == "fail"
        assert all(math.isfinite(r.z) for r in rows)
        assert all(r.status == "pass" for key, r in by_key.items() if key != (1, "q"))
        table = experiments.validation_table(ValidationReport(z_threshold=1e9, rows=rows, results=[result]))
        assert "inf" not in {experiments.format_cell(cell) for row in table.rows for cell in row}
