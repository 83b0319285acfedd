"""Exception hierarchy shared by every module."""


class OscibathError(Exception):
    """Base class for all library errors."""


class DomainError(OscibathError, ValueError):
    """Input outside the domain where an expression is defined."""


class CausticError(OscibathError, ArithmeticError):
    """Propagator prefactor diverges because sin(Omega t) vanishes."""

    def __init__(self, message, critical_time=None):
        super().__init__(message)
        self.critical_time = critical_time


class InvertedModeError(OscibathError, ArithmeticError):
    """A normal mode has non-positive squared frequency."""

    def __init__(self, message, critical_coupling=None):
        super().__init__(message)
        self.critical_coupling = critical_coupling


class SingularOperatorError(OscibathError, ArithmeticError):
    """Discretized operator I - S''/hbar is numerically singular."""


class ConvergenceError(OscibathError, RuntimeError):
    """Iterative eigensolver did not converge in the allotted sweeps."""


class StabilityError(OscibathError, RuntimeError):
    """Wavefunction norm drifted beyond tolerance during time stepping."""


class BoundaryError(OscibathError, RuntimeError):
    """Too much probability reached the edges of the evolution grid."""
