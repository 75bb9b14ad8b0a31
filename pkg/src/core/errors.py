"""
Error types
ข้อผิดพลาดเฉพาะของ tripwell (ทุกตัวสืบทอดจาก TripwellError)
"""


class TripwellError(Exception):
    """Root of all tripwell errors."""


class NormalizationError(TripwellError, ValueError):
    """State violates |a|^2+|b|^2+|c|^2 = 1."""


class DegeneratePhaseError(TripwellError, ValueError):
    """Phases q1, q3 are undefined because b = 0."""


class SingularDerivativeError(TripwellError, ValueError):
    """Derivative of the classical Hamiltonian hits a square-root singularity."""


class DomainError(TripwellError, ValueError):
    """Argument outside the domain of an operation."""


class DegenerateEquationError(TripwellError, ValueError):
    """The quadratic for y collapses (both leading coefficients vanish)."""


class ConvergenceError(TripwellError, RuntimeError):
    """Newton or continuation failed to converge."""


class IntegrationAccuracyError(TripwellError, RuntimeError):
    """Norm drift exceeded the configured bound."""


class BlowUpError(TripwellError, RuntimeError):
    """State became non-finite during propagation."""

    def __init__(self, message: str, last_good_time: float):
        super().__init__(message)
        self.last_good_time = last_good_time
