"""Pydantic schemas for binary Markov sources.

A source flips from 0 to 1 with probability ``alpha`` and from 1 to 0
with probability ``beta`` in every slot.  The joint chain analysis holds
the 4-state (source, estimate) chain built for one source at a given
update probability.
"""

from typing import List

from pydantic import BaseModel, Field, validator

from ..errors import InvalidParameterError

# The chain needs alpha, beta strictly inside (0, 1); keep a numeric margin.
PROB_MARGIN = 1e-9


class SourceParams(BaseModel):
    """One binary Markov source with its semantic weight and actuation costs."""

    alpha: float = Field(..., example=0.8)
    beta: float = Field(..., example=0.6)
    weight: float = Field(0.5, ge=0, example=0.5)
    cost_01: float = Field(1.0, ge=0)  # true state 0, estimate 1
    cost_10: float = Field(1.0, ge=0)  # true state 1, estimate 0

    class Config:
        frozen = True

    @validator("alpha", "beta")
    def _interior_probability(cls, v: float, field) -> float:
        if not PROB_MARGIN <= v <= 1.0 - PROB_MARGIN:
            raise InvalidParameterError(
                f"{field.name}={v} must lie in [{PROB_MARGIN}, {1.0 - PROB_MARGIN}]"
            )
        return v

    @property
    def lam(self) -> float:
        """Correlation parameter ``1 - alpha - beta``."""
        return 1.0 - self.alpha - self.beta


class JointChainAnalysis(BaseModel):
    """Transition matrix, stationary law and errors of the (X, X_hat) chain.

    States are ordered (0,0), (0,1), (1,0), (1,1).
    """

    q: float
    transition: List[List[float]]
    stationary: List[float]
    mismatch_prob_01: float
    mismatch_prob_10: float
    rte: float
    zeta: float

    class Config:
        frozen = True
