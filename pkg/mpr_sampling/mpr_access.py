"""Access layer: from sampling policies to effective update probabilities.

Two sensors share a multi-packet-reception channel.  Each one picks
silence, source 1 or source 2 independently in every slot; a transmitted
packet is decoded with the solo probability when its sensor transmits
alone and with the joint probability when both transmit, the two
decodings being independent.  A source's estimate is refreshed when at
least one decoded packet carries it.

The TDMA alternative lets at most one sensor transmit per slot, so every
transmission is decoded with its solo probability.
"""

import logging
from typing import Optional, Tuple

import numba
import numpy as np

from .errors import DomainError, InvalidPolicyError, InvalidScheduleError
from .schemas.access import SIMPLEX_TOL, Budget, MprChannel, SamplingPolicy, TdmaSchedule, UpdateProbs

logger = logging.getLogger(__name__)

BUDGET_TOL = 1e-12


def _update_probs_expr(a10, a11, a12, a20, a21, a22, p11, p22, p112, p221):
    # both sensors carrying the same source: at least one of two independent decodings
    both = 1.0 - (1.0 - p112) * (1.0 - p221)
    q1 = a11 * a20 * p11 + a10 * a21 * p22 + a11 * a21 * both + a11 * a22 * p112 + a12 * a21 * p221
    q2 = a12 * a20 * p11 + a10 * a22 * p22 + a12 * a22 * both + a12 * a21 * p112 + a11 * a22 * p221
    return q1, q2


update_probs_kernel = numba.njit(cache=True, nogil=True)(_update_probs_expr)


def _clip_prob(x: float) -> float:
    return min(1.0, max(0.0, x))


def check_policy(a: SamplingPolicy) -> None:
    """Raise ``InvalidPolicyError`` unless ``a`` lies on the probability simplex."""
    values = a.as_tuple()
    if any(v < 0 for v in values) or abs(sum(values) - 1.0) > SIMPLEX_TOL:
        raise InvalidPolicyError(f"not a probability vector: {values}")


def effective_update_probs(a1: SamplingPolicy, a2: SamplingPolicy, ch: MprChannel) -> UpdateProbs:
    """Per-slot update probabilities ``(q_1, q_2)`` under MPR access."""
    check_policy(a1)
    check_policy(a2)
    q1, q2 = _update_probs_expr(
        a1.silent, a1.sample_1, a1.sample_2,
        a2.silent, a2.sample_1, a2.sample_2,
        ch.p_solo_1, ch.p_solo_2, ch.p_joint_1, ch.p_joint_2,
    )
    return UpdateProbs(q_1=_clip_prob(q1), q_2=_clip_prob(q2))


def validate_budget(a: SamplingPolicy, gamma: float) -> bool:
    """True iff the policy transmits with probability at most ``gamma``."""
    return a.sample_1 + a.sample_2 <= gamma + BUDGET_TOL


def validate_schedule(sched: TdmaSchedule, budget: Optional[Budget] = None) -> None:
    """Raise ``InvalidScheduleError`` on a budget or orthogonality violation."""
    if sched.airtime > 1.0 + BUDGET_TOL:
        raise InvalidScheduleError(f"total airtime {sched.airtime} exceeds 1")
    if budget is None:
        return
    if sched.tau_11 + sched.tau_12 > budget.gamma_1 + BUDGET_TOL:
        raise InvalidScheduleError("sensor 1 exceeds its sampling budget")
    if sched.tau_21 + sched.tau_22 > budget.gamma_2 + BUDGET_TOL:
        raise InvalidScheduleError("sensor 2 exceeds its sampling budget")


def tdma_update_probs(
    sched: TdmaSchedule, ch: MprChannel, budget: Optional[Budget] = None
) -> UpdateProbs:
    """Update probabilities when each scheduled sensor transmits alone."""
    validate_schedule(sched, budget)
    q1 = sched.tau_11 * ch.p_solo_1 + sched.tau_21 * ch.p_solo_2
    q2 = sched.tau_12 * ch.p_solo_1 + sched.tau_22 * ch.p_solo_2
    return UpdateProbs(q_1=_clip_prob(q1), q_2=_clip_prob(q2))


def tdma_marginal_policies(sched: TdmaSchedule) -> Tuple[SamplingPolicy, SamplingPolicy]:
    """Per-slot action marginals of each sensor under a schedule."""
    return (
        SamplingPolicy.from_sampling(sched.tau_11, sched.tau_12),
        SamplingPolicy.from_sampling(sched.tau_21, sched.tau_22),
    )


def joint_action_table(a1: SamplingPolicy, a2: SamplingPolicy) -> np.ndarray:
    """3x3 table of ``Pr{a_1(t) = j, a_2(t) = k}`` for independent sensors."""
    check_policy(a1)
    check_policy(a2)
    return np.outer(np.array(a1.as_tuple()), np.array(a2.as_tuple()))


def tdma_action_table(sched: TdmaSchedule) -> np.ndarray:
    """3x3 joint action table of a schedule; both-transmit entries are zero."""
    validate_schedule(sched)
    table = np.zeros((3, 3))
    table[1, 0] = sched.tau_11
    table[2, 0] = sched.tau_12
    table[0, 1] = sched.tau_21
    table[0, 2] = sched.tau_22
    table[0, 0] = max(0.0, 1.0 - sched.airtime)
    return table


def check_gamma(gamma: float) -> None:
    if not 0.0 < gamma <= 1.0:
        raise DomainError(f"budget gamma={gamma} outside (0, 1]")
