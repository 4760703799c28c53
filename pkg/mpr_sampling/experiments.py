"""Experiment runners behind the command-line tools.

Each runner takes an ``ExperimentSpec`` and returns a ``ResultTable``
(or a ``ValidationReport``) whose rows come out in grid order; every
value is a pure function of its grid point.  ``write_csv`` renders a
table with a header row, comma delimiters and 12 significant digits.
"""

import csv
import logging
import math
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

from . import core_model, optimizer
from .config import get_settings
from .schemas.experiment import (
    POLICY_LABELS,
    ExperimentSpec,
    ResultTable,
    ValidationReport,
    ValidationRow,
)
from .schemas.scenario import PolicySolution, Scenario, SolverMethod
from .schemas.simulation import ScenarioResult, SimConfig, SimResult
from .schemas.source import SourceParams
from .simulator import simulate

logger = logging.getLogger(__name__)

CSV_FORMAT = ".12g"
# |z| reported when the batch means show no spread but miss the closed form
Z_LIMIT = 1e6


def solve_optimized(s: Scenario, spec: Optional[ExperimentSpec] = None) -> PolicySolution:
    """Vertex enumeration when both ``lam_i <= 0``, grid search otherwise."""
    if optimizer.in_vertex_regime(s):
        return optimizer.solve_vertex_enum(s)
    opts = spec.solver if spec is not None else None
    return optimizer.solve_grid(
        s,
        resolution=opts.resolution if opts else None,
        refine_rounds=opts.refine_rounds if opts else None,
    )


def policy_runners(s: Scenario, spec: Optional[ExperimentSpec] = None) -> Dict[str, Callable[[], PolicySolution]]:
    opts = spec.solver if spec is not None else None
    return {
        "optimized": lambda: solve_optimized(s, spec),
        "random": lambda: optimizer.baseline_random(s),
        "greedy1": lambda: optimizer.baseline_greedy(s, 1),
        "greedy2": lambda: optimizer.baseline_greedy(s, 2),
        "tdma": lambda: optimizer.baseline_tdma(
            s,
            resolution=opts.tdma_resolution if opts else None,
            refine_rounds=opts.refine_rounds if opts else None,
        ),
    }


def _selected_labels(spec: ExperimentSpec) -> List[str]:
    # fixed column order regardless of the order given in the file
    return [label for label in POLICY_LABELS if label in spec.solvers]


def _policy_row(s: Scenario, spec: ExperimentSpec, labels: List[str]) -> List[float]:
    runners = policy_runners(s, spec)
    return [runners[label]().objective_value for label in labels]


def run_rte_curves(spec: ExperimentSpec) -> ResultTable:
    """Closed-form RTE along the q grid for every (alpha, beta) curve.

    ``rte_limit`` repeats the q -> 0 limit of the curve on each row.
    """
    table = ResultTable(columns=["alpha", "beta", "q", "rte", "rte_limit"])
    for alpha, beta in spec.curves:
        src = SourceParams(alpha=alpha, beta=beta)
        limit = core_model.rte_closed_form_limit(src)
        for q in spec.sweep_grid:
            table.rows.append([alpha, beta, q, core_model.rte_closed_form(src, q), limit])
    return table


def run_gamma_sweep(spec: ExperimentSpec) -> ResultTable:
    """Weighted error of each policy as both budgets move along the grid."""
    labels = _selected_labels(spec)
    table = ResultTable(columns=["gamma"] + [f"E_{label}" for label in labels])
    for gamma in spec.sweep_grid:
        s = spec.scenario.with_budget(gamma)
        row = _policy_row(s, spec, labels)
        logger.debug("gamma=%g: %s", gamma, row)
        table.rows.append([gamma] + row)
    return table


def run_weight_sweep(spec: ExperimentSpec) -> ResultTable:
    """Weighted error of each policy for ``w_2`` along the grid, ``w_1 = 1 - w_2``."""
    labels = _selected_labels(spec)
    table = ResultTable(columns=["w2"] + [f"E_{label}" for label in labels])
    for w_2 in spec.sweep_grid:
        s = spec.scenario.with_weights(1.0 - w_2, w_2)
        row = _policy_row(s, spec, labels)
        logger.debug("w2=%g: %s", w_2, row)
        table.rows.append([w_2] + row)
    return table


def run_solve(spec: ExperimentSpec) -> ResultTable:
    """The nine vertex candidates of one scenario, with the selected row marked.

    Outside the vertex regime the grid solution is appended as an extra
    row and is the one selected.
    """
    s = spec.scenario
    candidates = optimizer.candidate_table(s)
    solution = solve_optimized(s, spec)
    best_index = min(range(len(candidates)), key=lambda k: (candidates[k].objective_value, k))
    columns = [
        "candidate",
        "a1_silent", "a1_sample_1", "a1_sample_2",
        "a2_silent", "a2_sample_1", "a2_sample_2",
        "q_1", "q_2", "rte_1", "rte_2", "objective", "selected",
    ]
    table = ResultTable(columns=columns)
    grid_selected = solution.method == SolverMethod.GRID_SEARCH
    for row in candidates:
        mark = solution.certificate.value if (row.index == best_index and not grid_selected) else ""
        table.rows.append(
            [f"vertex_{row.index}", *row.policy_1.as_tuple(), *row.policy_2.as_tuple(),
             row.q_1, row.q_2, row.rte_1, row.rte_2, row.objective_value, mark]
        )
    if grid_selected:
        table.rows.append(
            ["grid", *solution.policy_1.as_tuple(), *solution.policy_2.as_tuple(),
             solution.update_probs.q_1, solution.update_probs.q_2,
             solution.rte_1, solution.rte_2, solution.objective_value, solution.certificate.value]
        )
    logger.info(
        "%s selected, objective %.12g (%s)",
        "grid" if grid_selected else f"vertex_{best_index}",
        solution.objective_value,
        solution.certificate.value,
    )
    return table


def scenario_result(
    label: str, s: Scenario, solution: PolicySolution, simulation: Optional[SimResult] = None
) -> ScenarioResult:
    """Closed-form CAE of a solution, bundled with an optional simulation."""
    caes = []
    for src, q in zip(s.sources, solution.update_probs.as_tuple()):
        caes.append(0.5 * (src.cost_01 + src.cost_10) * core_model.steady_state_rte(src, q))
    return ScenarioResult(label=label, solution=solution, cae_1=caes[0], cae_2=caes[1], simulation=simulation)


def _z(empirical: float, expected: float, std_err: float) -> float:
    """Standardised difference, clamped to ``[-Z_LIMIT, Z_LIMIT]`` so CSV cells stay finite."""
    diff = empirical - expected
    if std_err == 0.0:
        return 0.0 if diff == 0.0 else math.copysign(Z_LIMIT, diff)
    return max(-Z_LIMIT, min(Z_LIMIT, diff / std_err))


def _sim_config(spec: ExperimentSpec, solution: PolicySolution, seed: int) -> SimConfig:
    settings = get_settings()
    sim = spec.sim
    horizon = sim.horizon if sim and sim.horizon is not None else settings.sim_horizon
    warmup = sim.warmup if sim and sim.warmup is not None else settings.sim_warmup
    batches = sim.batches if sim and sim.batches is not None else settings.sim_batches
    if solution.schedule is not None:
        policies = {"schedule": solution.schedule}
    else:
        policies = {"policy_1": solution.policy_1, "policy_2": solution.policy_2}
    return SimConfig(
        scenario=spec.scenario, horizon=horizon, warmup=warmup, batches=batches, seed=seed, **policies
    )


def _validation_rows(label: str, result: ScenarioResult, sim: SimResult, threshold: float) -> List[ValidationRow]:
    rows = []
    solution = result.solution
    for i in (1, 2):
        q = getattr(solution.update_probs, f"q_{i}")
        checks = [
            ("q", q, getattr(sim, f"empirical_q_{i}"), getattr(sim, f"std_err_q_{i}")),
            ("rte", getattr(solution, f"rte_{i}"), getattr(sim, f"empirical_rte_{i}"), getattr(sim, f"std_err_rte_{i}")),
            ("cae", getattr(result, f"cae_{i}"), getattr(sim, f"empirical_cae_{i}"), getattr(sim, f"std_err_cae_{i}")),
        ]
        for metric, expected, empirical, std_err in checks:
            z = _z(empirical, expected, std_err)
            if q == 0.0 and metric != "q":
                # the error of a never-updated source depends on the initial estimate
                status, z = "skipped", 0.0
            else:
                status = "pass" if abs(z) <= threshold and abs(z) < Z_LIMIT else "fail"
            rows.append(
                ValidationRow(
                    label=label, source=i, metric=metric, closed_form=expected,
                    empirical=empirical, std_err=std_err, z=z, status=status,
                )
            )
    return rows


def run_validate(spec: ExperimentSpec) -> ValidationReport:
    """Compare closed-form q, RTE and CAE with simulation for each requested policy.

    Policies that never update either source are excluded: no closed
    form exists for them.
    """
    settings = get_settings()
    threshold = settings.validation_z_threshold
    base_seed = spec.sim.seed if spec.sim and spec.sim.seed is not None else settings.default_seed
    s = spec.scenario

    solutions: List[Tuple[str, PolicySolution]] = []
    runners = policy_runners(s, spec)
    for label in _selected_labels(spec):
        solutions.append((label, runners[label]()))
    for named in spec.policies:
        solutions.append((named.label, optimizer.evaluate_policies(s, named.policy_1, named.policy_2, baseline=named.label)))

    report = ValidationReport(z_threshold=threshold)
    for k, (label, solution) in enumerate(solutions):
        if solution.update_probs.q_1 == 0.0 and solution.update_probs.q_2 == 0.0:
            logger.warning("policy %s never updates either source; excluded from validation", label)
            report.excluded.append(label)
            continue
        cfg = _sim_config(spec, solution, (base_seed + k) % 2**64)
        sim = simulate(cfg)
        result = scenario_result(label, s, solution, sim)
        report.results.append(result)
        report.rows.extend(_validation_rows(label, result, sim, threshold))

    for row in report.failures:
        logger.warning("%s source %d %s: z=%.3f exceeds %.1f", row.label, row.source, row.metric, row.z, threshold)
    return report


def validation_table(report: ValidationReport) -> ResultTable:
    table = ResultTable(
        columns=["label", "source", "metric", "closed_form", "empirical", "std_err", "z", "status"]
    )
    for row in report.rows:
        table.rows.append(
            [row.label, row.source, row.metric, row.closed_form, row.empirical, row.std_err, row.z, row.status]
        )
    return table


def tdma_crossover(table: ResultTable) -> Optional[float]:
    """First grid point from which the optimised MPR policy is never worse than TDMA.

    Returns ``None`` when TDMA is better at the last grid point.
    """
    opt = table.columns.index("E_optimized")
    tdma = table.columns.index("E_tdma")
    crossover = None
    for row in table.rows:
        if row[opt] <= row[tdma]:
            if crossover is None:
                crossover = row[0]
        else:
            crossover = None
    return crossover


def greedy_band_violations(table: ResultTable) -> List[float]:
    """Grid points where TDMA lies outside the band spanned by the two greedy baselines."""
    g1 = table.columns.index("E_greedy1")
    g2 = table.columns.index("E_greedy2")
    tdma = table.columns.index("E_tdma")
    return [
        row[0]
        for row in table.rows
        if not min(row[g1], row[g2]) <= row[tdma] <= max(row[g1], row[g2])
    ]


def format_cell(value: Union[float, str]) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), CSV_FORMAT)


def write_csv(table: ResultTable, path: Union[str, Path]) -> Path:
    """Write ``table`` to ``path``, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_cell(v) for v in row])
    logger.info("wrote %d rows to %s", len(table.rows), path)
    return path
