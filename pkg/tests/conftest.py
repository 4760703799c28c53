"""Shared fixtures: the two reference scenarios and seeded generators."""

from pathlib import Path

import numpy as np
import pytest

from mpr_sampling.config import get_settings
from mpr_sampling.schemas.access import Budget, MprChannel
from mpr_sampling.schemas.experiment import weight_sweep_scenario
from mpr_sampling.schemas.scenario import Scenario
from mpr_sampling.schemas.source import SourceParams

GAMMA_SWEEP_CHANNEL = dict(p_solo_1=0.9, p_solo_2=0.85, p_joint_1=0.6, p_joint_2=0.55)
CONFIGS_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture(autouse=True)
def _fresh_settings():
    # settings are cached per process; tests that set MPR_* variables need a clean cache
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def configs_dir():
    return CONFIGS_DIR


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def gamma_scenario():
    """Fast source 1 (lam < 0), slow source 2 (lam > 0), collision-limited channel, budget 0.5."""
    return Scenario(
        source_1=SourceParams(alpha=0.8, beta=0.6, weight=0.5),
        source_2=SourceParams(alpha=0.3, beta=0.2, weight=0.5),
        channel=MprChannel(**GAMMA_SWEEP_CHANNEL),
        budget=Budget(gamma_1=0.5, gamma_2=0.5),
    )


@pytest.fixture
def weight_scenario():
    return weight_sweep_scenario()


def random_negative_lam_scenario(rng, gamma=None) -> Scenario:
    """Random scenario with alpha_i + beta_i >= 1 for both sources."""
    sources = []
    for _ in range(2):
        alpha = rng.uniform(0.05, 0.95)
        beta = rng.uniform(max(1.0 - alpha, 0.05), 0.95)
        sources.append(SourceParams(alpha=alpha, beta=beta, weight=rng.uniform(0.0, 1.0)))
    return _with_random_channel(rng, sources, gamma)


def random_scenario(rng, gamma=None) -> Scenario:
    sources = [
        SourceParams(alpha=rng.uniform(0.05, 0.95), beta=rng.uniform(0.05, 0.95), weight=rng.uniform(0.0, 1.0))
        for _ in range(2)
    ]
    return _with_random_channel(rng, sources, gamma)


def _with_random_channel(rng, sources, gamma) -> Scenario:
    p_solo = rng.uniform(0.3, 1.0, size=2)
    p_joint = p_solo * rng.uniform(0.0, 1.0, size=2)
    g = rng.uniform(0.05, 1.0, size=2) if gamma is None else (gamma, gamma)
    return Scenario(
        source_1=sources[0],
        source_2=sources[1],
        channel=MprChannel(
            p_solo_1=p_solo[0], p_solo_2=p_solo[1], p_joint_1=p_joint[0], p_joint_2=p_joint[1]
        ),
        budget=Budget(gamma_1=g[0], gamma_2=g[1]),
    )
