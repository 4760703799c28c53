"""Request and response bodies of the HTTP API that have no library counterpart."""

from typing import List

from pydantic import BaseModel, Field

from .scenario import PolicySolution, VertexCandidate
from .source import SourceParams


class RteRequest(BaseModel):
    source: SourceParams
    q: float = Field(..., ge=0, le=1, example=0.5)


class RteResponse(BaseModel):
    """Closed-form errors of one source at update probability ``q``.

    At ``q = 0`` the fields hold the limiting values.
    """

    q: float
    rte: float
    zeta: float
    cae: float
    rte_limit: float


class SolveResponse(BaseModel):
    solution: PolicySolution
    candidates: List[VertexCandidate]
