"""Routers for policy optimisation.

``/policies/solve`` returns the optimised policy pair of a scenario
together with the nine vertex candidates; ``/policies/baselines``
evaluates the random, greedy and TDMA baselines.
"""

from typing import Dict

from fastapi import APIRouter

from .. import optimizer
from ..schemas.api import SolveResponse
from ..schemas.scenario import PolicySolution, Scenario


router = APIRouter(prefix="/policies", tags=["policies"])


@router.post("/solve", response_model=SolveResponse)
def solve_scenario(scenario: Scenario) -> SolveResponse:
    return SolveResponse(
        solution=optimizer.solve(scenario),
        candidates=optimizer.candidate_table(scenario),
    )


@router.post("/baselines", response_model=Dict[str, PolicySolution])
def evaluate_baselines(scenario: Scenario) -> Dict[str, PolicySolution]:
    """Evaluate every baseline policy for the scenario."""
    return optimizer.baselines(scenario)
