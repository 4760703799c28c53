"""Exception hierarchy for the MPR sampling library.

Every error raised deliberately by the library derives from
``MprSamplingError`` so that callers (the CLI and the HTTP service) can
translate them into exit codes or responses in one place.  Parameter
errors also derive from ``ValueError`` because that is what they are.
"""


class MprSamplingError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(MprSamplingError, ValueError):
    """A source, channel or weight parameter is outside its valid range."""


class DomainError(MprSamplingError, ValueError):
    """An argument is outside the domain of the requested operation."""


class DegenerateChainError(MprSamplingError):
    """A stationary solve was requested for a chain that is not irreducible.

    This happens at ``q = 0``: the estimate never changes, so the
    stationary law depends on the initial estimate.  Use
    ``core_model.rte_closed_form_limit`` for the limiting error instead.
    """


class InvalidPolicyError(InvalidParameterError):
    """A sampling policy is not a probability vector."""


class InvalidScheduleError(InvalidParameterError):
    """A TDMA schedule violates its budget or the orthogonality constraint."""


class SimulationConfigError(MprSamplingError):
    """A simulation configuration is infeasible or inconsistent."""


class ConfigurationError(MprSamplingError):
    """An experiment configuration file could not be read or validated."""
