"""Source and error models for one binary Markov source.

This module builds the 4-state chain of the pair (source state,
receiver estimate) under the synchronize-or-hold estimator, solves it
for its stationary law and evaluates the closed forms of the real-time
reconstruction error (RTE) and the cost of actuation error (CAE).

Within a slot the source evolves first; a successfully decoded update
then copies the current state into the estimate.  The error is
measured after the update.  All functions are pure.
"""

import logging
from typing import Sequence, Tuple

import numba
import numpy as np

from .errors import DegenerateChainError, DomainError, InvalidParameterError, MprSamplingError
from .schemas.source import PROB_MARGIN, JointChainAnalysis, SourceParams

logger = logging.getLogger(__name__)


def rte_expr(alpha, beta, q):
    """Unchecked RTE expression; broadcasts over numpy arrays."""
    s = alpha + beta
    return 2.0 * alpha * beta * (1.0 - q) / (s * (s - q * (s - 1.0)))


# Same expression, compiled for the grid kernel.  At q = 0 it
# evaluates to the limit 2*alpha*beta/(alpha+beta)**2.
rte_kernel = numba.njit(cache=True, nogil=True)(rte_expr)


def check_source(src: SourceParams) -> None:
    """Raise ``InvalidParameterError`` unless ``src`` is a usable source.

    ``SourceParams`` validates on construction; this re-check covers
    instances built with ``construct()`` or mutated copies.
    """
    for name in ("alpha", "beta"):
        v = getattr(src, name)
        if not PROB_MARGIN <= v <= 1.0 - PROB_MARGIN:
            raise InvalidParameterError(f"{name}={v} outside ({PROB_MARGIN}, {1 - PROB_MARGIN})")
    for name in ("weight", "cost_01", "cost_10"):
        if getattr(src, name) < 0:
            raise InvalidParameterError(f"{name} must be nonnegative")


def _check_q(q: float, allow_zero: bool) -> None:
    low_ok = q >= 0.0 if allow_zero else q > 0.0
    if not (low_ok and q <= 1.0):
        interval = "[0, 1]" if allow_zero else "(0, 1]"
        raise DomainError(f"update probability q={q} outside {interval}")


def stationary_source_dist(src: SourceParams) -> Tuple[float, float]:
    """Stationary probabilities ``(p0, p1)`` of the source alone."""
    check_source(src)
    s = src.alpha + src.beta
    return src.beta / s, src.alpha / s


def source_transition_matrix(src: SourceParams) -> np.ndarray:
    """2x2 transition matrix of the source."""
    check_source(src)
    a, b = src.alpha, src.beta
    return np.array([[1.0 - a, a], [b, 1.0 - b]])


def joint_transition_matrix(alpha: float, beta: float, q: float) -> np.ndarray:
    """4x4 transition matrix of (X, X_hat) over (0,0), (0,1), (1,0), (1,1)."""
    a, b, u = alpha, beta, 1.0 - q
    return np.array(
        [
            [1.0 - a, 0.0, a * u, a * q],
            [q * (1.0 - a), (1.0 - a) * u, 0.0, a],
            [b, 0.0, (1.0 - b) * u, q * (1.0 - b)],
            [b * q, b * u, 0.0, 1.0 - b],
        ]
    )


def stationary_linear_solve(transition: np.ndarray) -> np.ndarray:
    """Stationary vector from ``(I - T^T) pi = 0`` plus the normalisation row."""
    n = transition.shape[0]
    system = np.vstack([np.eye(n) - transition.T, np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    pi = np.maximum(pi, 0.0)
    return pi / pi.sum()


def stationary_power_iteration(
    transition: np.ndarray, tol: float = 1e-15, max_iter: int = 1_000_000
) -> np.ndarray:
    """Stationary vector by repeated multiplication ``pi <- pi T``."""
    pi = np.full(transition.shape[0], 1.0 / transition.shape[0])
    for it in range(max_iter):
        pi_new = pi @ transition
        if np.max(np.abs(pi_new - pi)) < tol:
            return pi_new / pi_new.sum()
        pi = pi_new
    raise MprSamplingError(f"power iteration did not converge in {max_iter} steps")


def build_joint_chain(src: SourceParams, q: float) -> JointChainAnalysis:
    """Build and solve the joint (source, estimate) chain at update probability ``q``.

    At ``q = 0`` the estimate never changes and the chain is not
    irreducible, so no stationary law is defined; ``DegenerateChainError``
    is raised and ``rte_closed_form_limit`` gives the limiting error.
    """
    check_source(src)
    _check_q(q, allow_zero=True)
    if q == 0.0:
        raise DegenerateChainError(
            "joint chain is not irreducible at q=0; use rte_closed_form_limit"
        )
    transition = joint_transition_matrix(src.alpha, src.beta, q)
    pi = stationary_linear_solve(transition)
    p01, p10 = float(pi[1]), float(pi[2])
    rte = p01 + p10
    return JointChainAnalysis(
        q=q,
        transition=transition.tolist(),
        stationary=pi.tolist(),
        mismatch_prob_01=p01,
        mismatch_prob_10=p10,
        rte=rte,
        zeta=rte / 2.0,
    )


def rte_closed_form(src: SourceParams, q: float) -> float:
    """Steady-state probability that the estimate differs from the source."""
    check_source(src)
    _check_q(q, allow_zero=False)
    return rte_expr(src.alpha, src.beta, q)


def rte_closed_form_lambda(src: SourceParams, q: float) -> float:
    """The RTE written through ``lam = 1 - alpha - beta``."""
    check_source(src)
    _check_q(q, allow_zero=False)
    lam = src.lam
    return 2.0 * src.alpha * src.beta * (1.0 - q) / ((1.0 - lam) * (1.0 - lam * (1.0 - q)))


def rte_closed_form_limit(src: SourceParams) -> float:
    """Limit of the RTE as ``q -> 0``.

    This is the disagreement probability of two independent draws from
    the source's stationary law.  At ``q = 0`` itself the error depends
    on the initial estimate and is left undefined.
    """
    check_source(src)
    s = src.alpha + src.beta
    return 2.0 * src.alpha * src.beta / (s * s)


def steady_state_rte(src: SourceParams, q: float) -> float:
    """RTE on the closed interval ``[0, 1]``, using the limit at ``q = 0``.

    Baselines that never serve a source are scored with this value.
    """
    check_source(src)
    _check_q(q, allow_zero=True)
    if q == 0.0:
        return rte_closed_form_limit(src)
    return rte_expr(src.alpha, src.beta, q)


def zeta_closed_form(src: SourceParams, q: float) -> float:
    """Common stationary probability of the (0,1) and (1,0) states."""
    return rte_closed_form(src, q) / 2.0


def cae_closed_form(src: SourceParams, q: float) -> float:
    """Steady-state cost of actuation error.

    The two mismatch states are equally likely, so the CAE is the RTE
    scaled by the mean directional cost.
    """
    return 0.5 * (src.cost_01 + src.cost_10) * rte_closed_form(src, q)


def cae_generic(src: SourceParams, stationary: Sequence[float]) -> float:
    """Cost-weighted mismatch mass of any joint distribution."""
    check_source(src)
    return src.cost_01 * stationary[1] + src.cost_10 * stationary[2]


def weighted_objective(values: Sequence[float], weights: Sequence[float]) -> float:
    """``w1 * v1 + w2 * v2``."""
    if any(w < 0 for w in weights):
        raise InvalidParameterError("weights must be nonnegative")
    return weights[0] * values[0] + weights[1] * values[1]


def cae_weight_transform(src: SourceParams) -> float:
    """Weight under which RTE minimisation reproduces weighted-CAE minimisation."""
    check_source(src)
    return src.weight * (src.cost_01 + src.cost_10) / 2.0
