from __future__ import annotations


class GaussSpectralError(Exception):
    """Base class for all errors raised by gauss_spectral."""


class DomainError(GaussSpectralError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """The parameter hits a pole (s = 1 for Hurwitz, beta in the pole set)."""


class PeriodicFitError(DomainError):
    """A sampled function is not periodic to the requested tolerance."""


class ConvergenceError(GaussSpectralError, RuntimeError):
    def __init__(self, message: str, *, iterations: int | None = None) -> None:
        if iterations is not None:
            message = f"{message} (after {iterations} iterations)"
        super().__init__(message)
        self.iterations = iterations


class ResourceError(GaussSpectralError, RuntimeError):
    """A configured size limit would be exceeded."""


class NumericalWarning(UserWarning):
    """Accuracy caveat that does not stop the computation."""
