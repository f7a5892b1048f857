"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class PhotonBellError(Exception):
    """Base class for every error raised by photonbell."""


class InputValidationError(PhotonBellError, ValueError):
    """A parameter lies outside its allowed domain (beta, unit vectors, counts, ...)."""


class DegenerateKinematicsError(PhotonBellError, ArithmeticError):
    """A kinematic denominator vanishes, e.g. a photon collinear with a massless fermion."""


class DomainError(PhotonBellError, ValueError):
    """An analytic formula is evaluated outside its domain of convergence."""


class ConvergenceError(PhotonBellError, RuntimeError):
    """An iterative procedure exhausted its budget.

    ``estimate`` and ``error`` carry the best value reached and its error bound.
    """

    def __init__(self, message: str, estimate=None, error=None, diagnostics=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.diagnostics = diagnostics


class ProbabilityRangeError(PhotonBellError, ArithmeticError):
    """A probability left [0, 1] by more than round-off; never clamped silently."""
