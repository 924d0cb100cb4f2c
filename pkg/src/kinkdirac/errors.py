"""Exception types raised by the numerical routines."""


class KinkDiracError(Exception):
    """Base class for all package errors."""


class PoleError(KinkDiracError, ZeroDivisionError):
    """Argument sits on a pole of Gamma or of a hypergeometric denominator."""


class ConvergenceError(KinkDiracError, ArithmeticError):
    """A series or iteration did not converge within its budget."""


class DomainError(KinkDiracError, ValueError):
    """Argument outside the region an operation supports."""


class DegenerateError(KinkDiracError, ValueError):
    """Requested quantity is undefined for the given degenerate input."""


class DivergenceError(KinkDiracError, ArithmeticError):
    """Quadrature tail is too large for the integral to be trusted."""


class DecayConditionError(KinkDiracError, ValueError):
    """The asymptotic solution on a half-line does not decay."""


class IntegrationError(KinkDiracError, ArithmeticError):
    """ODE integrator failed (step-size underflow or similar)."""


class BoundaryZeroError(KinkDiracError, ArithmeticError):
    """Function vanishes (numerically) on a counting contour."""


class ConfigError(KinkDiracError, ValueError):
    """Invalid physical parameters or run configuration."""
