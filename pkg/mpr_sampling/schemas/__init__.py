"""Pydantic models for the sampling library.

Each module in this package defines the models for one part of the
system: sources and their joint chains, the access layer, optimisation
scenarios and solutions, simulations, and experiment files.  The same
models validate library inputs, experiment configuration and the bodies
of the HTTP API.
"""

from .access import Budget, MprChannel, SamplingPolicy, TdmaSchedule, UpdateProbs
from .experiment import (
    ExperimentKind,
    ExperimentSpec,
    ResultTable,
    ValidationReport,
    ValidationRow,
    load_experiment,
)
from .scenario import (
    Certificate,
    ObjectiveKind,
    PolicySolution,
    Scenario,
    SolverMethod,
    VertexCandidate,
)
from .simulation import ScenarioResult, SimConfig, SimResult
from .source import JointChainAnalysis, SourceParams

__all__ = [
    "Budget",
    "Certificate",
    "ExperimentKind",
    "ExperimentSpec",
    "JointChainAnalysis",
    "MprChannel",
    "ObjectiveKind",
    "PolicySolution",
    "ResultTable",
    "SamplingPolicy",
    "Scenario",
    "ScenarioResult",
    "SimConfig",
    "SimResult",
    "SolverMethod",
    "SourceParams",
    "TdmaSchedule",
    "UpdateProbs",
    "ValidationReport",
    "ValidationRow",
    "VertexCandidate",
    "load_experiment",
]
