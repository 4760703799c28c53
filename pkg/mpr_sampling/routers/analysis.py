"""Routers for single-source analysis.

These endpoints expose the closed-form reconstruction error of one
binary Markov source and the joint (source, estimate) chain behind it.
"""

from fastapi import APIRouter

from .. import core_model
from ..schemas.api import RteRequest, RteResponse
from ..schemas.source import JointChainAnalysis


router = APIRouter(prefix="/analysis", tags=["analysis"])


@router.post("/rte", response_model=RteResponse)
def closed_form_rte(body: RteRequest) -> RteResponse:
    """Return RTE, zeta and CAE of a source at update probability ``q``."""
    src = body.source
    rte = core_model.steady_state_rte(src, body.q)
    return RteResponse(
        q=body.q,
        rte=rte,
        zeta=rte / 2.0,
        cae=0.5 * (src.cost_01 + src.cost_10) * rte,
        rte_limit=core_model.rte_closed_form_limit(src),
    )


@router.post("/joint-chain", response_model=JointChainAnalysis)
def joint_chain(body: RteRequest) -> JointChainAnalysis:
    """Build and solve the 4-state chain; ``q = 0`` is rejected."""
    return core_model.build_joint_chain(body.source, body.q)
