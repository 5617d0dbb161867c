"""Exception hierarchy."""


class MQEDError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(MQEDError, ValueError):
    """Malformed arguments: wrong shapes, non-Hermitian input, bad grids."""


class InvalidModelError(MQEDError, ValueError):
    """A medium model or response set that cannot be used (e.g. singular mu)."""


class NotPSDError(MQEDError):
    """A Hermitian matrix has an eigenvalue below the allowed tolerance."""

    def __init__(self, message, min_eigenvalue):
        super().__init__(f"{message} (min eigenvalue {min_eigenvalue:.6e})")
        self.min_eigenvalue = min_eigenvalue


class NonPassiveMediumError(NotPSDError):
    """Noise covariance of a medium is not positive semidefinite."""


class SingularityError(MQEDError):
    """The Helmholtz operator is (numerically) singular at the requested point."""


class ResolutionError(InvalidInputError):
    """Non-local kernel not resolved by the spatial grid."""


class DualitySingularityError(MQEDError):
    """Rotated permeability is singular, so the rotated noise is undefined."""


class ClassificationError(MQEDError):
    """Duality closure failed where it must hold; indicates an assembly bug."""


class ConsistencyError(MQEDError):
    """An internal physical consistency check failed."""
