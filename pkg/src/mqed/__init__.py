"""Macroscopic quantum electrodynamics numerics for general linear media.

Green tensors, fluctuation-dissipation checks, noise covariance roots and
electromagnetic duality for non-local, bianisotropic and non-reciprocal
absorbing media.
"""

from .constants import SCALED, SI, PhysicalConstants
from .errors import (
    ClassificationError,
    ConsistencyError,
    DualitySingularityError,
    InvalidInputError,
    InvalidModelError,
    MQEDError,
    NonPassiveMediumError,
    NotPSDError,
    ResolutionError,
    SingularityError,
)
from .media import (
    LorentzTerm,
    MediumClass,
    MediumModel,
    ResponseSet,
    classify,
    decompose_magnetoelectric,
    recompose_magnetoelectric,
    schwarz_check,
)

__version__ = "0.1.0"

__all__ = [
    "SCALED",
    "SI",
    "PhysicalConstants",
    "MQEDError",
    "InvalidInputError",
    "InvalidModelError",
    "NotPSDError",
    "NonPassiveMediumError",
    "SingularityError",
    "ResolutionError",
    "DualitySingularityError",
    "ClassificationError",
    "ConsistencyError",
    "LorentzTerm",
    "MediumModel",
    "MediumClass",
    "ResponseSet",
    "classify",
    "decompose_magnetoelectric",
    "recompose_magnetoelectric",
    "schwarz_check",
]
