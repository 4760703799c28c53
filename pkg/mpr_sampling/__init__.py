"""Goal-oriented sampling of two Markov sources over a multi-packet-reception channel.

The package computes the steady-state reconstruction error of binary
Markov sources tracked by a synchronize-or-hold receiver, optimises the
randomized sampling policies of two sensors that share an MPR channel,
and checks every closed form against a seeded slot simulator.  It is
used as a library, through ``python -m mpr_sampling`` or through the
FastAPI app in ``mpr_sampling.main``.
"""

__version__ = "0.1.0"

from .core_model import (  # noqa: E402
    build_joint_chain,
    cae_closed_form,
    rte_closed_form,
    rte_closed_form_limit,
    weighted_objective,
)
from .optimizer import solve, solve_grid, solve_vertex_enum  # noqa: E402
from .simulator import simulate, simulate_tdma  # noqa: E402

__all__ = [
    "__version__",
    "build_joint_chain",
    "cae_closed_form",
    "rte_closed_form",
    "rte_closed_form_limit",
    "simulate",
    "simulate_tdma",
    "solve",
    "solve_grid",
    "solve_vertex_enum",
    "weighted_objective",
]
