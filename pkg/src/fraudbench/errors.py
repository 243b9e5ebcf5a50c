"""Exception hierarchy shared by all fraudbench modules.

The CLI maps these to exit codes: ContractError (and subclasses) -> 1,
NumericalError -> 2.
"""


class FraudBenchError(Exception):
    """Base class for all errors raised by this package."""


class ContractError(FraudBenchError):
    """A precondition, configuration, or input-schema violation."""


class CapabilityError(ContractError):
    """An operation was requested from a model kind that does not support it."""


class NumericalError(FraudBenchError):
    """A numerical procedure failed (non-convergence, singular system)."""
