"""Exception and warning types shared across the package."""


class QgtSimError(Exception):
    """Base class for all package errors."""


class InvalidInputError(QgtSimError, ValueError):
    """Malformed or out-of-contract input (non-finite values, zero amplitudes, ...)."""


class SingularityError(QgtSimError):
    """Requested quantity is undefined at the spectral degeneracy point."""


class CoverageError(QgtSimError):
    """Quadrature grid does not cover the required interval."""


class NumericalError(QgtSimError):
    """A numerical routine failed to reach its accuracy target."""


class PropagationError(NumericalError):
    """Time propagation hit a non-finite Hamiltonian sample."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class InsufficientDataError(QgtSimError):
    """Trace too short or too sparse to support a frequency fit."""


class FitConvergenceError(NumericalError):
    """Least-squares refinement did not converge."""


class RefinementError(QgtSimError):
    """Resonance refinement failed (contrast not unimodal in the bracket)."""


class ConfigError(QgtSimError):
    """Invalid run configuration (unknown keys, wrong schema version, ...)."""


class PerturbativeRegimeWarning(UserWarning):
    """Modulation amplitude large enough that higher-harmonic terms matter."""


class RwaRegimeWarning(UserWarning):
    """Carrier-to-drive frequency ratio low enough that the RWA degrades."""
