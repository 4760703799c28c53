"""Pydantic schemas for Monte Carlo simulation runs."""

from typing import Optional

from pydantic import BaseModel, Field, root_validator

from .access import SamplingPolicy, TdmaSchedule
from .scenario import PolicySolution, Scenario


class SimConfig(BaseModel):
    """One seeded simulation run.

    Exactly one of the policy pair or the TDMA schedule must be given.
    ``horizon`` counts all slots including the ``warmup`` prefix; the
    measured slots are split into ``batches`` equal batches.
    """

    scenario: Scenario
    policy_1: Optional[SamplingPolicy] = None
    policy_2: Optional[SamplingPolicy] = None
    schedule: Optional[TdmaSchedule] = None
    horizon: int = Field(1_000_000, gt=0)
    seed: int = Field(20240101, ge=0, lt=2**64)
    warmup: int = Field(10_000, ge=0)
    batches: int = Field(100, ge=2)

    @root_validator(skip_on_failure=True)
    def _one_policy_kind(cls, values):
        has_pair = values.get("policy_1") is not None and values.get("policy_2") is not None
        has_schedule = values.get("schedule") is not None
        if has_pair == has_schedule:
            raise ValueError("give either policy_1 and policy_2, or a schedule")
        if values["horizon"] <= values["warmup"]:
            raise ValueError("horizon must exceed warmup")
        if values["horizon"] - values["warmup"] < values["batches"]:
            raise ValueError("need at least one measured slot per batch")
        return values

    @property
    def is_tdma(self) -> bool:
        return self.schedule is not None


class SimResult(BaseModel):
    """Time averages over the measured slots with batch-means standard errors."""

    empirical_rte_1: float
    empirical_rte_2: float
    empirical_cae_1: float
    empirical_cae_2: float
    empirical_q_1: float
    empirical_q_2: float
    std_err_rte_1: float
    std_err_rte_2: float
    std_err_cae_1: float
    std_err_cae_2: float
    std_err_q_1: float
    std_err_q_2: float
    # occupancy of the two mismatch states, per source
    mismatch_01_1: float
    mismatch_01_2: float
    mismatch_10_1: float
    mismatch_10_2: float
    std_err_mismatch_01_1: float
    std_err_mismatch_01_2: float
    std_err_mismatch_10_1: float
    std_err_mismatch_10_2: float
    slots_measured: int
    seed: int


class ScenarioResult(BaseModel):
    """Closed-form evaluation of one policy, optionally with simulation."""

    label: str
    solution: PolicySolution
    cae_1: float
    cae_2: float
    simulation: Optional[SimResult] = None
