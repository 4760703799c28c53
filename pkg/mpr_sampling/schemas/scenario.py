"""Pydantic schemas for optimisation scenarios and their solutions.

A scenario bundles the two sources, the channel and the sampling
budgets.  Solvers return a ``PolicySolution``; the vertex solver also
exposes the full table of candidate pairs it evaluated.
"""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, Field

from .access import Budget, MprChannel, SamplingPolicy, TdmaSchedule, UpdateProbs
from .source import SourceParams


class ObjectiveKind(str, Enum):
    RTE = "RTE"
    CAE = "CAE"


class SolverMethod(str, Enum):
    VERTEX_ENUM = "VertexEnum"
    GRID_SEARCH = "GridSearch"
    BASELINE = "Baseline"


class Certificate(str, Enum):
    GLOBAL_BY_THEOREM = "GlobalByTheorem1"
    BEST_FOUND = "BestFound"


class Scenario(BaseModel):
    """Everything needed to evaluate or optimise a pair of policies."""

    source_1: SourceParams = Field(
        default_factory=lambda: SourceParams(alpha=0.8, beta=0.6, weight=0.5)
    )
    source_2: SourceParams = Field(
        default_factory=lambda: SourceParams(alpha=0.3, beta=0.2, weight=0.5)
    )
    channel: MprChannel = Field(
        default_factory=lambda: MprChannel(
            p_solo_1=0.9, p_solo_2=0.85, p_joint_1=0.6, p_joint_2=0.55
        )
    )
    budget: Budget = Field(default_factory=lambda: Budget(gamma_1=0.5, gamma_2=0.5))
    objective_kind: ObjectiveKind = ObjectiveKind.RTE

    class Config:
        frozen = True

    @property
    def sources(self) -> Tuple[SourceParams, SourceParams]:
        return (self.source_1, self.source_2)

    def with_budget(self, gamma_1: float, gamma_2: Optional[float] = None) -> "Scenario":
        """Copy of the scenario with new sampling budgets."""
        budget = Budget(gamma_1=gamma_1, gamma_2=gamma_1 if gamma_2 is None else gamma_2)
        return self.copy(update={"budget": budget})

    def with_weights(self, w_1: float, w_2: float) -> "Scenario":
        """Copy of the scenario with new semantic weights."""
        return self.copy(
            update={
                "source_1": self.source_1.copy(update={"weight": w_1}),
                "source_2": self.source_2.copy(update={"weight": w_2}),
            }
        )


class PolicySolution(BaseModel):
    """A feasible policy pair together with its evaluated objective.

    ``schedule`` is set only for the TDMA baseline; its policies are then
    the per-slot marginals of the schedule and ``update_probs`` come from
    the orthogonal-access formula.
    """

    policy_1: SamplingPolicy
    policy_2: SamplingPolicy
    update_probs: UpdateProbs
    rte_1: float
    rte_2: float
    objective_value: float
    method: SolverMethod
    baseline: Optional[str] = None
    certificate: Certificate = Certificate.BEST_FOUND
    schedule: Optional[TdmaSchedule] = None

    class Config:
        frozen = True


class VertexCandidate(BaseModel):
    """One of the nine vertex pairs evaluated by the vertex solver."""

    index: int
    policy_1: SamplingPolicy
    policy_2: SamplingPolicy
    q_1: float
    q_2: float
    rte_1: float
    rte_2: float
    objective_value: float

