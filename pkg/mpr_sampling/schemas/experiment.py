"""Pydantic schemas for experiment files and their outputs.

An experiment file is YAML whose top-level sections map onto
``ExperimentSpec``::

    scenario:            # Scenario fields; missing keys take the defaults
      source_1: {alpha: 0.8, beta: 0.6, weight: 0.5}
      budget: {gamma_1: 0.5, gamma_2: 0.5}
    sweep:               # either an explicit grid ...
      grid: [0.01, 0.05, 0.1]
    # sweep: {start: 0.05, stop: 0.95, step: 0.05}   ... or a range
    solvers: [optimized, random, greedy1, greedy2, tdma]
    solver: {resolution: 101, refine_rounds: 3, tdma_resolution: 101}
    sim: {horizon: 1000000, warmup: 10000, batches: 100, seed: 7}
    output: results/gamma_sweep.csv

The sweep grid holds q values for RTE curves, budgets for the gamma
sweep and ``w_2`` values for the weight sweep.
"""

from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, Field, ValidationError, root_validator

from ..errors import ConfigurationError
from .access import SIMPLEX_TOL, Budget, MprChannel, SamplingPolicy
from .scenario import Scenario
from .simulation import ScenarioResult
from .source import SourceParams

POLICY_LABELS = ("optimized", "random", "greedy1", "greedy2", "tdma")
DEFAULT_CURVES = ((0.1, 0.1), (0.3, 0.2), (0.5, 0.5), (0.8, 0.6), (0.9, 0.9))


class ExperimentKind(str, Enum):
    RTE_CURVES = "RteCurves"
    GAMMA_SWEEP = "GammaSweep"
    WEIGHT_SWEEP = "WeightSweep"
    VALIDATE = "Validate"
    SOLVE = "Solve"


def _frange(start: float, stop: float, step: float) -> List[float]:
    if step <= 0:
        raise ValueError("sweep step must be positive")
    values = []
    k = 0
    while True:
        v = round(start + k * step, 12)
        if v > stop + 1e-12:
            return values
        values.append(v)
        k += 1


def weight_sweep_scenario() -> Scenario:
    """Defaults of the weight sweep: fast source 1, strong MPR channel, budget 0.9."""
    return Scenario(
        source_1=SourceParams(alpha=0.8, beta=0.1, weight=0.5),
        source_2=SourceParams(alpha=0.4, beta=0.2, weight=0.5),
        channel=MprChannel(p_solo_1=0.9, p_solo_2=0.85, p_joint_1=0.82, p_joint_2=0.78),
        budget=Budget(gamma_1=0.9, gamma_2=0.9),
    )


def default_grid(kind: ExperimentKind) -> List[float]:
    if kind == ExperimentKind.RTE_CURVES:
        return _frange(0.01, 1.0, 0.01)
    if kind == ExperimentKind.GAMMA_SWEEP:
        return [0.01] + _frange(0.05, 0.95, 0.05)
    if kind == ExperimentKind.WEIGHT_SWEEP:
        return _frange(0.0, 1.0, 0.05)
    return []


class SolverOptions(BaseModel):
    """Overrides for the grid solvers; unset values come from Settings."""

    resolution: Optional[int] = Field(None, ge=2)
    refine_rounds: Optional[int] = Field(None, ge=0)
    tdma_resolution: Optional[int] = Field(None, ge=2)


class SimOverrides(BaseModel):
    """Overrides for simulation runs; unset values come from Settings."""

    horizon: Optional[int] = Field(None, gt=0)
    warmup: Optional[int] = Field(None, ge=0)
    batches: Optional[int] = Field(None, ge=2)
    seed: Optional[int] = Field(None, ge=0, lt=2**64)


class NamedPolicyPair(BaseModel):
    """An explicit policy pair to validate, e.g. ``silent`` or a hand-tuned split."""

    label: str
    policy_1: SamplingPolicy
    policy_2: SamplingPolicy


class ExperimentSpec(BaseModel):
    kind: ExperimentKind
    scenario: Scenario
    sweep_grid: List[float] = Field(default_factory=list)
    curves: List[Tuple[float, float]] = Field(default_factory=lambda: list(DEFAULT_CURVES))
    solvers: List[str] = Field(default_factory=lambda: list(POLICY_LABELS))
    policies: List[NamedPolicyPair] = Field(default_factory=list)
    solver: SolverOptions = Field(default_factory=SolverOptions)
    sim: Optional[SimOverrides] = None
    output_path: Optional[Path] = None

    @root_validator(pre=True)
    def _expand_sections(cls, values):
        values = dict(values)
        kind = ExperimentKind(values.get("kind", ExperimentKind.GAMMA_SWEEP))
        if "output" in values:
            values.setdefault("output_path", values.pop("output"))
        sweep = values.pop("sweep", None)
        if sweep is not None and "sweep_grid" not in values:
            if isinstance(sweep, dict) and "grid" in sweep:
                values["sweep_grid"] = sweep["grid"]
            elif isinstance(sweep, dict):
                values["sweep_grid"] = _frange(
                    float(sweep["start"]), float(sweep["stop"]), float(sweep["step"])
                )
            else:
                values["sweep_grid"] = sweep
        values.setdefault("sweep_grid", default_grid(kind))
        if values.get("scenario") is None:
            values["scenario"] = weight_sweep_scenario() if kind == ExperimentKind.WEIGHT_SWEEP else Scenario()
        return values

    @root_validator(skip_on_failure=True)
    def _check_grid_and_names(cls, values):
        kind = values["kind"]
        grid = values["sweep_grid"]
        if kind in (ExperimentKind.RTE_CURVES, ExperimentKind.GAMMA_SWEEP, ExperimentKind.WEIGHT_SWEEP):
            if not grid:
                raise ValueError("sweep grid must not be empty")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError("sweep grid must be strictly increasing")
            if kind == ExperimentKind.WEIGHT_SWEEP:
                ok = all(0.0 <= v <= 1.0 for v in grid)
                interval = "[0, 1]"
            else:
                ok = all(0.0 < v <= 1.0 for v in grid)
                interval = "(0, 1]"
            if not ok:
                raise ValueError(f"sweep grid values must lie in {interval}")
        unknown = [name for name in values["solvers"] if name not in POLICY_LABELS]
        if unknown:
            raise ValueError(f"unknown solvers {unknown}; choose from {list(POLICY_LABELS)}")
        for alpha, beta in values["curves"]:
            SourceParams(alpha=alpha, beta=beta)
        budget = values["scenario"].budget
        for pair in values["policies"]:
            for k, policy in ((1, pair.policy_1), (2, pair.policy_2)):
                if policy.transmit_prob > budget.for_sensor(k) + SIMPLEX_TOL:
                    raise ValueError(f"policy {pair.label!r}: sensor {k} exceeds its sampling budget")
        return values

    def with_seed(self, seed: int) -> "ExperimentSpec":
        current = self.sim.dict() if self.sim is not None else {}
        sim = SimOverrides(**{**current, "seed": seed})
        return self.copy(update={"sim": sim})


class ResultTable(BaseModel):
    """Rows of one CSV output, in emission order."""

    columns: List[str]
    rows: List[List[Union[float, str]]] = Field(default_factory=list)


class ValidationRow(BaseModel):
    label: str
    source: int
    metric: str  # q, rte or cae
    closed_form: float
    empirical: float
    std_err: float
    z: float
    status: str  # pass, fail or skipped


class ValidationReport(BaseModel):
    """Closed-form versus simulated values for every validated policy."""

    z_threshold: float
    rows: List[ValidationRow] = Field(default_factory=list)
    results: List[ScenarioResult] = Field(default_factory=list)
    excluded: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(row.status != "fail" for row in self.rows)

    @property
    def failures(self) -> List[ValidationRow]:
        return [row for row in self.rows if row.status == "fail"]


def load_experiment(path: Optional[Union[str, Path]], kind: ExperimentKind) -> ExperimentSpec:
    """Read an experiment file; ``path=None`` gives the defaults for ``kind``.

    Any unreadable file, YAML error or schema violation is raised as
    ``ConfigurationError``.
    """
    data = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise ConfigurationError(f"cannot read {path}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ConfigurationError(f"invalid YAML in {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError(f"{path}: top level must be a mapping")
    file_kind = data.pop("kind", None)
    if file_kind is not None and file_kind != kind.value:
        raise ConfigurationError(f"{path} describes a {file_kind} experiment, not {kind.value}")
    try:
        return ExperimentSpec(kind=kind, **data)
    except (ValidationError, ValueError) as exc:
        raise ConfigurationError(f"invalid experiment configuration: {exc}") from exc
