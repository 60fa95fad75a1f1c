"""Exception types raised across the package."""


class ProjSchwarzError(Exception):
    """Base class for all errors raised by this package."""


class JetError(ProjSchwarzError, ValueError):
    """Mismatched jet spaces, bad multi-indices, or non-invertible jets."""


class DomainError(ProjSchwarzError, ValueError):
    """A map or field was evaluated outside its domain."""


class SingularJacobianError(ProjSchwarzError, ValueError):
    """The map is not a local diffeomorphism at the requested point."""


class ConvergenceError(ProjSchwarzError, RuntimeError):
    """Newton refinement of a pointwise inverse did not converge."""


class DimensionError(ProjSchwarzError, ValueError):
    """The operation is not defined in the requested dimension."""


class DataError(ProjSchwarzError, ValueError):
    """Input data violates a structural invariant (symmetry, trace, ...)."""


class ParseError(ProjSchwarzError, ValueError):
    """Syntax error in an expression; ``position`` is a 0-based offset."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class EvaluationError(ProjSchwarzError, ValueError):
    """An expression could not be evaluated (e.g. division by zero)."""


class ScenarioError(ProjSchwarzError, ValueError):
    """A scenario file is malformed or references unknown objects."""
