"""Routers for Monte Carlo runs.

A simulation is synchronous: the response is returned when the run
finishes, so keep ``horizon`` moderate when calling over HTTP.
"""

from fastapi import APIRouter

from ..schemas.simulation import SimConfig, SimResult
from ..simulator import simulate


router = APIRouter(prefix="/simulations", tags=["simulations"])


@router.post("/", response_model=SimResult)
def run_simulation(cfg: SimConfig) -> SimResult:
    """Simulate a policy pair or a TDMA schedule for the given scenario."""
    return simulate(cfg)
