"""Sampling-constrained minimisation of the weighted reconstruction error.

Each sensor's feasible policies form a triangle in the plane of its two
transmit probabilities, with vertices silent / all-budget-to-source-1 /
all-budget-to-source-2.  The update probabilities are bilinear in the
two policies.  When both sources have ``lam = 1 - alpha - beta <= 0``
the error is concave in each policy block and one of the nine vertex
pairs is a global minimiser, so enumerating them is exact.  Outside
that regime an interior policy can win; ``solve_grid`` searches a
triangular grid and refines the incumbent one block at a time, without
an optimality claim.

The module also provides the comparison baselines: random split,
greedy towards one source, and TDMA with optimised slot fractions.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numba
import numpy as np

from . import core_model
from .core_model import rte_kernel
from .config import get_settings
from .errors import InvalidPolicyError
from .mpr_access import (
    check_gamma,
    effective_update_probs,
    tdma_marginal_policies,
    tdma_update_probs,
    update_probs_kernel,
    validate_budget,
)
from .schemas.access import SamplingPolicy, TdmaSchedule, UpdateProbs
from .schemas.scenario import (
    Certificate,
    ObjectiveKind,
    PolicySolution,
    Scenario,
    SolverMethod,
    VertexCandidate,
)

logger = logging.getLogger(__name__)

REFINE_FACTOR = 0.25
BASELINE_NAMES = ("random", "greedy1", "greedy2", "tdma")


def vertex_set(gamma: float) -> List[SamplingPolicy]:
    """Extreme points of a sensor's feasible policy set, in fixed order."""
    check_gamma(gamma)
    return [
        SamplingPolicy(silent=1.0, sample_1=0.0, sample_2=0.0),
        SamplingPolicy(silent=1.0 - gamma, sample_1=gamma, sample_2=0.0),
        SamplingPolicy(silent=1.0 - gamma, sample_1=0.0, sample_2=gamma),
    ]


def scenario_weights(s: Scenario) -> Tuple[float, float]:
    """Weights applied to the two RTEs; CAE objectives use the cost-scaled weights."""
    if s.objective_kind == ObjectiveKind.CAE:
        return (
            core_model.cae_weight_transform(s.source_1),
            core_model.cae_weight_transform(s.source_2),
        )
    return (s.source_1.weight, s.source_2.weight)


def in_vertex_regime(s: Scenario) -> bool:
    """True when both sources satisfy ``lam <= 0`` and vertex enumeration is exact."""
    return s.source_1.lam <= 0.0 and s.source_2.lam <= 0.0


def _score(s: Scenario, q: UpdateProbs) -> Tuple[float, float, float]:
    rte_1 = core_model.steady_state_rte(s.source_1, q.q_1)
    rte_2 = core_model.steady_state_rte(s.source_2, q.q_2)
    return rte_1, rte_2, core_model.weighted_objective((rte_1, rte_2), scenario_weights(s))


def evaluate_policies(
    s: Scenario,
    a1: SamplingPolicy,
    a2: SamplingPolicy,
    method: SolverMethod = SolverMethod.BASELINE,
    certificate: Certificate = Certificate.BEST_FOUND,
    baseline: Optional[str] = None,
) -> PolicySolution:
    """Evaluate a feasible policy pair under MPR access."""
    if not validate_budget(a1, s.budget.gamma_1):
        raise InvalidPolicyError("policy_1 exceeds the sampling budget of sensor 1")
    if not validate_budget(a2, s.budget.gamma_2):
        raise InvalidPolicyError("policy_2 exceeds the sampling budget of sensor 2")
    q = effective_update_probs(a1, a2, s.channel)
    rte_1, rte_2, objective = _score(s, q)
    return PolicySolution(
        policy_1=a1,
        policy_2=a2,
        update_probs=q,
        rte_1=rte_1,
        rte_2=rte_2,
        objective_value=objective,
        method=method,
        baseline=baseline,
        certificate=certificate,
    )


def evaluate_schedule(s: Scenario, sched: TdmaSchedule) -> PolicySolution:
    """Evaluate a TDMA schedule; policies are reported as per-slot marginals."""
    q = tdma_update_probs(sched, s.channel, s.budget)
    rte_1, rte_2, objective = _score(s, q)
    a1, a2 = tdma_marginal_policies(sched)
    return PolicySolution(
        policy_1=a1,
        policy_2=a2,
        update_probs=q,
        rte_1=rte_1,
        rte_2=rte_2,
        objective_value=objective,
        method=SolverMethod.BASELINE,
        baseline="tdma",
        schedule=sched,
    )


def candidate_table(s: Scenario) -> List[VertexCandidate]:
    """All nine vertex pairs, sensor-1 vertex major, with their scores."""
    rows = []
    for i, v1 in enumerate(vertex_set(s.budget.gamma_1)):
        for j, v2 in enumerate(vertex_set(s.budget.gamma_2)):
            sol = evaluate_policies(s, v1, v2)
            rows.append(
                VertexCandidate(
                    index=3 * i + j,
                    policy_1=v1,
                    policy_2=v2,
                    q_1=sol.update_probs.q_1,
                    q_2=sol.update_probs.q_2,
                    rte_1=sol.rte_1,
                    rte_2=sol.rte_2,
                    objective_value=sol.objective_value,
                )
            )
    return rows


def solve_vertex_enum(s: Scenario) -> PolicySolution:
    """Best of the nine vertex pairs; ties go to the first in table order.

    The certificate is global when both ``lam_i <= 0``.
    """
    table = candidate_table(s)
    for row in table:
        logger.debug(
            "vertex %d: q=(%.6f, %.6f) objective=%.12g",
            row.index, row.q_1, row.q_2, row.objective_value,
        )
    best = table[0]
    for row in table[1:]:
        if row.objective_value < best.objective_value:
            best = row
    certificate = Certificate.GLOBAL_BY_THEOREM if in_vertex_regime(s) else Certificate.BEST_FOUND
    logger.info("vertex pair %d selected (objective %.12g, %s)", best.index, best.objective_value, certificate.value)
    return evaluate_policies(
        s, best.policy_1, best.policy_2, method=SolverMethod.VERTEX_ENUM, certificate=certificate
    )


@numba.njit(cache=True, nogil=True)
def _grid_argmin(points_1, points_2, alpha_1, beta_1, alpha_2, beta_2, w_1, w_2, p11, p22, p112, p221):
    best = np.inf
    best_i = -1
    best_j = -1
    for i in range(points_1.shape[0]):
        a11 = points_1[i, 0]
        a12 = points_1[i, 1]
        a10 = max(0.0, 1.0 - a11 - a12)
        for j in range(points_2.shape[0]):
            a21 = points_2[j, 0]
            a22 = points_2[j, 1]
            a20 = max(0.0, 1.0 - a21 - a22)
            q1, q2 = update_probs_kernel(a10, a11, a12, a20, a21, a22, p11, p22, p112, p221)
            q1 = min(1.0, q1)
            q2 = min(1.0, q2)
            value = w_1 * rte_kernel(alpha_1, beta_1, q1) + w_2 * rte_kernel(alpha_2, beta_2, q2)
            # strict comparison keeps the lowest index among ties
            if value < best:
                best = value
                best_i = i
                best_j = j
    return best_i, best_j, best


def triangle_grid(gamma: float, resolution: int) -> np.ndarray:
    """Points ``(a_1, a_2) = gamma * (i, j) / (resolution - 1)`` with ``i + j <= resolution - 1``.

    The three vertices are hit exactly.
    """
    n = resolution
    frac = np.arange(n) / (n - 1)
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    mask = ii + jj <= n - 1
    return np.column_stack([gamma * frac[ii[mask]], gamma * frac[jj[mask]]])


def _neighbourhood_grid(center: np.ndarray, half_width: float, gamma: float, resolution: int) -> np.ndarray:
    axis_1 = np.linspace(center[0] - half_width, center[0] + half_width, resolution)
    axis_2 = np.linspace(center[1] - half_width, center[1] + half_width, resolution)
    xx, yy = np.meshgrid(axis_1, axis_2, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    keep = (pts[:, 0] >= 0.0) & (pts[:, 1] >= 0.0) & (pts.sum(axis=1) <= gamma)
    return pts[keep]


def _kernel_args(s: Scenario) -> tuple:
    w_1, w_2 = scenario_weights(s)
    ch = s.channel
    return (
        s.source_1.alpha, s.source_1.beta, s.source_2.alpha, s.source_2.beta,
        w_1, w_2, ch.p_solo_1, ch.p_solo_2, ch.p_joint_1, ch.p_joint_2,
    )


def solve_grid(
    s: Scenario, resolution: Optional[int] = None, refine_rounds: Optional[int] = None
) -> PolicySolution:
    """Exhaustive search over the product of the two triangular grids, then refinement.

    Each refinement round re-grids a square neighbourhood of the current
    policy of one sensor while the other is held fixed, alternating
    between sensors; the neighbourhood shrinks by ``REFINE_FACTOR`` per
    round.  A move is taken only on strict improvement.
    """
    settings = get_settings()
    resolution = settings.grid_resolution if resolution is None else resolution
    refine_rounds = settings.grid_refine_rounds if refine_rounds is None else refine_rounds
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    gammas = (s.budget.gamma_1, s.budget.gamma_2)
    args = _kernel_args(s)

    grid_1 = triangle_grid(gammas[0], resolution)
    grid_2 = triangle_grid(gammas[1], resolution)
    i, j, best = _grid_argmin(grid_1, grid_2, *args)
    incumbent = [grid_1[i].copy(), grid_2[j].copy()]
    logger.debug("grid %dx%d best %.12g", len(grid_1), len(grid_2), best)

    for r in range(1, refine_rounds + 1):
        for block in (0, 1):
            half_width = gammas[block] * REFINE_FACTOR ** r
            local = _neighbourhood_grid(incumbent[block], half_width, gammas[block], resolution)
            if len(local) == 0:
                continue
            fixed = incumbent[1 - block].reshape(1, 2)
            if block == 0:
                k, _, value = _grid_argmin(local, fixed, *args)
            else:
                _, k, value = _grid_argmin(fixed, local, *args)
            if value < best:
                best = value
                incumbent[block] = local[k].copy()
        logger.debug("refinement round %d best %.12g", r, best)

    a1 = SamplingPolicy.from_sampling(float(incumbent[0][0]), float(incumbent[0][1]))
    a2 = SamplingPolicy.from_sampling(float(incumbent[1][0]), float(incumbent[1][1]))
    return evaluate_policies(s, a1, a2, method=SolverMethod.GRID_SEARCH)


def solve(s: Scenario) -> PolicySolution:
    """Vertex enumeration where it is exact, grid search otherwise."""
    if in_vertex_regime(s):
        return solve_vertex_enum(s)
    return solve_grid(s)


def baseline_random(s: Scenario) -> PolicySolution:
    """Each sensor splits its budget evenly between the two sources."""
    g1, g2 = s.budget.gamma_1, s.budget.gamma_2
    a1 = SamplingPolicy(silent=1.0 - g1, sample_1=g1 / 2.0, sample_2=g1 / 2.0)
    a2 = SamplingPolicy(silent=1.0 - g2, sample_1=g2 / 2.0, sample_2=g2 / 2.0)
    return evaluate_policies(s, a1, a2, baseline="random")


def baseline_greedy(s: Scenario, target: int) -> PolicySolution:
    """Both sensors spend their whole budget on source ``target``."""
    if target not in (1, 2):
        raise ValueError("target must be 1 or 2")
    policies = []
    for gamma in (s.budget.gamma_1, s.budget.gamma_2):
        sample = (gamma, 0.0) if target == 1 else (0.0, gamma)
        policies.append(SamplingPolicy(silent=1.0 - gamma, sample_1=sample[0], sample_2=sample[1]))
    return evaluate_policies(s, policies[0], policies[1], baseline=f"greedy{target}")


def _tdma_values(s: Scenario, first: int, own: np.ndarray, fractions: np.ndarray):
    # Sensor `first` takes the slot fractions in `own`; the other sensor uses
    # all remaining airtime, split between the sources by `fractions`.
    ch = s.channel
    gamma_second = s.budget.for_sensor(3 - first)
    p_first = ch.p_solo_1 if first == 1 else ch.p_solo_2
    p_second = ch.p_solo_2 if first == 1 else ch.p_solo_1

    cap = np.clip(np.minimum(gamma_second, 1.0 - own.sum(axis=1)), 0.0, None)
    second_1 = cap[:, None] * fractions[None, :]
    second_2 = np.maximum(cap[:, None] - second_1, 0.0)
    q1 = np.minimum(1.0, p_first * own[:, 0][:, None] + p_second * second_1)
    q2 = np.minimum(1.0, p_first * own[:, 1][:, None] + p_second * second_2)

    w_1, w_2 = scenario_weights(s)
    src_1, src_2 = s.source_1, s.source_2
    values = w_1 * core_model.rte_expr(src_1.alpha, src_1.beta, q1) + w_2 * core_model.rte_expr(
        src_2.alpha, src_2.beta, q2
    )
    return values, second_1, second_2


def _tdma_orientation(s: Scenario, first: int, resolution: int, refine_rounds: int) -> TdmaSchedule:
    gamma_first = s.budget.for_sensor(first)
    own = triangle_grid(gamma_first, resolution)
    fractions = np.arange(resolution) / (resolution - 1)
    values, second_1, second_2 = _tdma_values(s, first, own, fractions)
    # np.argmin returns the first minimum in row-major order
    row, col = np.unravel_index(int(np.argmin(values)), values.shape)
    best = values[row, col]
    best_own = own[row].copy()
    best_fraction = fractions[col]
    other = (second_1[row, col], second_2[row, col])

    for r in range(1, refine_rounds + 1):
        half_width = REFINE_FACTOR ** r
        local_own = _neighbourhood_grid(best_own, gamma_first * half_width, gamma_first, resolution)
        if len(local_own) == 0:
            continue
        local_fractions = np.linspace(
            max(0.0, best_fraction - half_width), min(1.0, best_fraction + half_width), resolution
        )
        values, second_1, second_2 = _tdma_values(s, first, local_own, local_fractions)
        row, col = np.unravel_index(int(np.argmin(values)), values.shape)
        if values[row, col] < best:
            best = values[row, col]
            best_own = local_own[row].copy()
            best_fraction = local_fractions[col]
            other = (second_1[row, col], second_2[row, col])

    own_taus = (float(best_own[0]), float(best_own[1]))
    other_taus = (float(other[0]), float(other[1]))
    if first == 1:
        return TdmaSchedule(tau_11=own_taus[0], tau_12=own_taus[1], tau_21=other_taus[0], tau_22=other_taus[1])
    return TdmaSchedule(tau_11=other_taus[0], tau_12=other_taus[1], tau_21=own_taus[0], tau_22=own_taus[1])


def baseline_tdma(
    s: Scenario, resolution: Optional[int] = None, refine_rounds: Optional[int] = None
) -> PolicySolution:
    """TDMA with slot fractions optimised by grid search.

    One sensor's fractions range over its budget triangle and the other
    sensor fills the remaining airtime; both orders are searched and the
    first wins ties.  The incumbent is refined as in ``solve_grid``.
    """
    settings = get_settings()
    resolution = settings.tdma_resolution if resolution is None else resolution
    refine_rounds = settings.grid_refine_rounds if refine_rounds is None else refine_rounds
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    best = None
    for first in (1, 2):
        candidate = evaluate_schedule(s, _tdma_orientation(s, first, resolution, refine_rounds))
        if best is None or candidate.objective_value < best.objective_value:
            best = candidate
    return best


def baselines(s: Scenario, names: Tuple[str, ...] = BASELINE_NAMES) -> Dict[str, PolicySolution]:
    """Evaluate the named baselines for one scenario."""
    runners = {
        "random": lambda: baseline_random(s),
        "greedy1": lambda: baseline_greedy(s, 1),
        "greedy2": lambda: baseline_greedy(s, 2),
        "tdma": lambda: baseline_tdma(s),
    }
    unknown = set(names) - set(runners)
    if unknown:
        raise ValueError(f"unknown baselines: {sorted(unknown)}")
    return {name: runners[name]() for name in names}
