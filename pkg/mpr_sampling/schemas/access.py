"""Pydantic schemas for the access layer.

Sensors pick one of three actions per slot (stay silent, sample source
1, sample source 2) according to a stationary randomized policy.  The
MPR channel decides which transmitted packets are decoded; TDMA
schedules instead give each (sensor, source) pair a fraction of
orthogonal slots.
"""

from typing import Tuple

from pydantic import BaseModel, Field, root_validator

from ..errors import InvalidPolicyError, InvalidParameterError

SIMPLEX_TOL = 1e-12


class MprChannel(BaseModel):
    """Success probabilities of the two-user MPR channel."""

    p_solo_1: float = Field(..., ge=0, le=1, example=0.9)
    p_solo_2: float = Field(..., ge=0, le=1, example=0.85)
    p_joint_1: float = Field(..., ge=0, le=1, example=0.6)
    p_joint_2: float = Field(..., ge=0, le=1, example=0.55)

    class Config:
        frozen = True

    @root_validator(skip_on_failure=True)
    def _joint_not_better_than_solo(cls, values):
        if values["p_joint_1"] > values["p_solo_1"]:
            raise InvalidParameterError("p_joint_1 must not exceed p_solo_1")
        if values["p_joint_2"] > values["p_solo_2"]:
            raise InvalidParameterError("p_joint_2 must not exceed p_solo_2")
        return values


class SamplingPolicy(BaseModel):
    """Per-slot action distribution of one sensor."""

    silent: float = Field(..., ge=0, example=0.1)
    sample_1: float = Field(..., ge=0, example=0.9)
    sample_2: float = Field(..., ge=0, example=0.0)

    class Config:
        frozen = True

    @root_validator(skip_on_failure=True)
    def _sums_to_one(cls, values):
        total = values["silent"] + values["sample_1"] + values["sample_2"]
        if abs(total - 1.0) > SIMPLEX_TOL:
            raise InvalidPolicyError(f"policy probabilities sum to {total!r}, not 1")
        return values

    @classmethod
    def from_sampling(cls, sample_1: float, sample_2: float) -> "SamplingPolicy":
        """Build a policy from its two transmit probabilities."""
        return cls(
            silent=max(0.0, 1.0 - sample_1 - sample_2),
            sample_1=sample_1,
            sample_2=sample_2,
        )

    @property
    def transmit_prob(self) -> float:
        return self.sample_1 + self.sample_2

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.silent, self.sample_1, self.sample_2)


class Budget(BaseModel):
    """Maximum per-slot transmission probability of each sensor."""

    gamma_1: float = Field(..., gt=0, le=1, example=0.5)
    gamma_2: float = Field(..., gt=0, le=1, example=0.5)

    class Config:
        frozen = True

    def for_sensor(self, k: int) -> float:
        return self.gamma_1 if k == 1 else self.gamma_2


class TdmaSchedule(BaseModel):
    """Long-term slot fractions; ``tau_ki`` is sensor k transmitting source i."""

    tau_11: float = Field(0.0, ge=0, le=1)
    tau_12: float = Field(0.0, ge=0, le=1)
    tau_21: float = Field(0.0, ge=0, le=1)
    tau_22: float = Field(0.0, ge=0, le=1)

    class Config:
        frozen = True

    @property
    def airtime(self) -> float:
        return self.tau_11 + self.tau_12 + self.tau_21 + self.tau_22


class UpdateProbs(BaseModel):
    """Per-slot probability that each source's estimate is refreshed."""

    q_1: float = Field(..., ge=0, le=1)
    q_2: float = Field(..., ge=0, le=1)

    class Config:
        frozen = True

    def as_tuple(self) -> Tuple[float, float]:
        return (self.q_1, self.q_2)
