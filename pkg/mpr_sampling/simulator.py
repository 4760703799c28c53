"""Slot-level Monte Carlo simulation of the two-source, two-sensor system.

Per slot: both sources evolve, the sensors draw their actions, the
channel decodes each transmitted packet, and every source whose state
arrived in at least one decoded packet has its estimate synchronised.
Errors are measured after the update, as in the closed forms.

Randomness comes from a single ``numpy.random.Generator`` over
``PCG64(seed)``.  Uniforms are drawn in chunks of ``CHUNK_SLOTS`` slots,
``SLOT_UNIFORMS`` per slot in the column order: source 1 transition,
source 2 transition, joint action, sensor 1 decoding, sensor 2
decoding.  Both the MPR and the TDMA case sample the pair of actions
from one 3x3 joint action table; for MPR the table is the outer product
of the two policies, for TDMA the both-transmit cells are empty.
Standard errors come from batch means over ``batches`` equal batches of
the measured slots (the last batch absorbs any remainder).
"""

import logging

import numba
import numpy as np

from .errors import InvalidPolicyError, InvalidScheduleError, SimulationConfigError
from .mpr_access import check_policy, joint_action_table, tdma_action_table, validate_budget, validate_schedule
from .schemas.simulation import SimConfig, SimResult

logger = logging.getLogger(__name__)

SLOT_UNIFORMS = 5
CHUNK_SLOTS = 1 << 16

# accumulator columns
_ERR, _COST, _UPD, _MIS01, _MIS10 = range(5)


@numba.njit(cache=True, nogil=True)
def _run_slots(u, x, xhat, slot0, warmup, batch_size, n_batches, alpha, beta,
               cost_01, cost_10, action_cdf, p_solo, p_joint, acc, counts):
    upd = np.zeros(2, dtype=np.bool_)
    for s in range(u.shape[0]):
        for i in range(2):
            if x[i] == 0:
                if u[s, i] < alpha[i]:
                    x[i] = 1
            elif u[s, i] < beta[i]:
                x[i] = 0

        r = u[s, 2]
        cell = 8
        for c in range(9):
            if r < action_cdf[c]:
                cell = c
                break
        act_1 = cell // 3
        act_2 = cell % 3
        both = act_1 != 0 and act_2 != 0

        upd[0] = False
        upd[1] = False
        if act_1 != 0:
            p = p_joint[0] if both else p_solo[0]
            if u[s, 3] < p:
                upd[act_1 - 1] = True
        if act_2 != 0:
            p = p_joint[1] if both else p_solo[1]
            if u[s, 4] < p:
                upd[act_2 - 1] = True
        for i in range(2):
            if upd[i]:
                xhat[i] = x[i]

        t = slot0 + s
        if t < warmup:
            continue
        b = min((t - warmup) // batch_size, n_batches - 1)
        counts[b] += 1
        for i in range(2):
            if upd[i]:
                acc[b, i, 2] += 1.0
            if x[i] == 0 and xhat[i] == 1:
                acc[b, i, 0] += 1.0
                acc[b, i, 1] += cost_01[i]
                acc[b, i, 3] += 1.0
            elif x[i] == 1 and xhat[i] == 0:
                acc[b, i, 0] += 1.0
                acc[b, i, 1] += cost_10[i]
                acc[b, i, 4] += 1.0


def _action_cdf(table: np.ndarray) -> np.ndarray:
    flat = table.ravel()
    cdf = np.cumsum(flat) / flat.sum()
    last = int(np.flatnonzero(flat > 0.0)[-1])
    cdf[last:] = 1.0
    return cdf


def _run(cfg: SimConfig, table: np.ndarray) -> SimResult:
    s = cfg.scenario
    src = s.sources
    alpha = np.array([src[0].alpha, src[1].alpha])
    beta = np.array([src[0].beta, src[1].beta])
    cost_01 = np.array([src[0].cost_01, src[1].cost_01])
    cost_10 = np.array([src[0].cost_10, src[1].cost_10])
    p_solo = np.array([s.channel.p_solo_1, s.channel.p_solo_2])
    p_joint = np.array([s.channel.p_joint_1, s.channel.p_joint_2])
    cdf = _action_cdf(table)

    logger.debug("simulating horizon=%d warmup=%d seed=%d", cfg.horizon, cfg.warmup, cfg.seed)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    # initial state from the stationary law, estimate synchronised
    x = (rng.random(2) < alpha / (alpha + beta)).astype(np.int64)
    xhat = x.copy()

    measured = cfg.horizon - cfg.warmup
    batch_size = measured // cfg.batches
    acc = np.zeros((cfg.batches, 2, 5))
    counts = np.zeros(cfg.batches, dtype=np.int64)

    slot = 0
    while slot < cfg.horizon:
        n = min(CHUNK_SLOTS, cfg.horizon - slot)
        u = rng.random((n, SLOT_UNIFORMS))
        _run_slots(u, x, xhat, slot, cfg.warmup, batch_size, cfg.batches, alpha, beta,
                   cost_01, cost_10, cdf, p_solo, p_joint, acc, counts)
        slot += n

    means = acc.sum(axis=0) / measured
    batch_means = acc / counts[:, None, None]
    std_err = batch_means.std(axis=0, ddof=1) / np.sqrt(cfg.batches)

    result = SimResult(
        empirical_rte_1=means[0, _ERR],
        empirical_rte_2=means[1, _ERR],
        empirical_cae_1=means[0, _COST],
        empirical_cae_2=means[1, _COST],
        empirical_q_1=means[0, _UPD],
        empirical_q_2=means[1, _UPD],
        std_err_rte_1=std_err[0, _ERR],
        std_err_rte_2=std_err[1, _ERR],
        std_err_cae_1=std_err[0, _COST],
        std_err_cae_2=std_err[1, _COST],
        std_err_q_1=std_err[0, _UPD],
        std_err_q_2=std_err[1, _UPD],
        mismatch_01_1=means[0, _MIS01],
        mismatch_01_2=means[1, _MIS01],
        mismatch_10_1=means[0, _MIS10],
        mismatch_10_2=means[1, _MIS10],
        std_err_mismatch_01_1=std_err[0, _MIS01],
        std_err_mismatch_01_2=std_err[1, _MIS01],
        std_err_mismatch_10_1=std_err[0, _MIS10],
        std_err_mismatch_10_2=std_err[1, _MIS10],
        slots_measured=measured,
        seed=cfg.seed,
    )
    logger.info(
        "simulated %d slots (seed %d): rte=(%.6f, %.6f) q=(%.6f, %.6f)",
        measured, cfg.seed, result.empirical_rte_1, result.empirical_rte_2,
        result.empirical_q_1, result.empirical_q_2,
    )
    return result


def simulate(cfg: SimConfig) -> SimResult:
    """Simulate a policy pair under MPR access; schedules go to ``simulate_tdma``."""
    if cfg.is_tdma:
        return simulate_tdma(cfg)
    budget = cfg.scenario.budget
    try:
        check_policy(cfg.policy_1)
        check_policy(cfg.policy_2)
    except InvalidPolicyError as exc:
        raise SimulationConfigError(str(exc)) from exc
    if not validate_budget(cfg.policy_1, budget.gamma_1):
        raise SimulationConfigError("policy_1 exceeds the sampling budget of sensor 1")
    if not validate_budget(cfg.policy_2, budget.gamma_2):
        raise SimulationConfigError("policy_2 exceeds the sampling budget of sensor 2")
    return _run(cfg, joint_action_table(cfg.policy_1, cfg.policy_2))


def simulate_tdma(cfg: SimConfig) -> SimResult:
    """Simulate i.i.d. per-slot TDMA scheduling with solo decoding only."""
    if not cfg.is_tdma:
        raise SimulationConfigError("simulate_tdma needs a schedule")
    try:
        validate_schedule(cfg.schedule, cfg.scenario.budget)
    except InvalidScheduleError as exc:
        raise SimulationConfigError(str(exc)) from exc
    return _run(cfg, tdma_action_table(cfg.schedule))
