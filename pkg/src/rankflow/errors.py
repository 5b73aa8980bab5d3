"""Exception hierarchy shared across the package.

ConfigError covers anything a caller got wrong (bad parameters, impossible
study setups); NumericalError covers runtime failures of the numerics
(quadrature that does not converge, root brackets that cannot be
established). The CLI maps them to exit codes 2 and 3 respectively.
"""


class RankflowError(Exception):
    """Base class for all package errors."""


class ConfigError(RankflowError, ValueError):
    """Invalid parameters or an invalid combination of them."""


class DomainError(ConfigError):
    """Argument outside the mathematical domain of a function."""


class UnsupportedReferenceError(ConfigError):
    """No exact reference solution is registered for the requested flux."""


class NumericalError(RankflowError, RuntimeError):
    """A numerical procedure failed to reach its accuracy target."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge to the requested accuracy."""


class BracketError(NumericalError):
    """A root bracket could not be established."""


class EmitError(RankflowError, OSError):
    """Writing a result table to its destination failed."""


class DegenerateInputWarning(UserWarning):
    """Input is formally allowed but makes the requested quantity vacuous."""
