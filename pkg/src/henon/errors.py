"""Exception hierarchy shared by all numerical modules."""


class HenonError(Exception):
    """Base class for every error raised by the package."""


class DomainError(HenonError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NumericalError(HenonError, RuntimeError):
    """A numerical procedure failed to deliver a result to tolerance."""


class BracketError(NumericalError):
    """A root or eigenvalue could not be bracketed.

    ``trace`` optionally carries the (parameter, value) pairs that were
    probed, so the caller can see why the search failed.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace) if trace is not None else []


class IntegrationError(NumericalError):
    """The ODE integrator stopped before reaching its target."""


class QuadratureError(NumericalError):
    """Successive quadrature refinements did not agree to tolerance."""
