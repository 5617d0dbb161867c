"""Electromagnetic duality rotations.

Dual pairs ``(E, Z0 H)`` and ``(Z0 D, B)`` rotate with
``D(theta) = [[cos, sin], [-sin, cos]]``. The stacked responses
``(eps, xi, zeta, mu)`` then transform with the 4x4 matrix
:func:`response_transform`, which is ``D (x) D`` written out for the
block matrix ``[[eps, xi], [zeta, mu]] -> D [[eps, xi], [zeta, mu]] D^T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .errors import ClassificationError, DualitySingularityError, InvalidModelError
from .green import GreenBlocks
from .media import MediumClass, MediumModel, ResponseSet, classify

_I3 = np.eye(3)

SYMPLECTIC = np.array([[0.0, 1.0], [-1.0, 0.0]])


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


def response_transform(theta: float) -> np.ndarray:
    """4x4 mixing matrix acting on the stacked ``(eps, xi, zeta, mu)``."""
    c, s = math.cos(theta), math.sin(theta)
    cc, ss, sc = c * c, s * s, s * c
    return np.array(
        [
            [cc, sc, sc, ss],
            [-sc, cc, -ss, sc],
            [-sc, -ss, cc, sc],
            [ss, -sc, -sc, cc],
        ]
    )


@dataclass(frozen=True, eq=False)
class FieldPair:
    """A dual pair of complex 3-vectors, e.g. ``(E, Z0 H)``."""

    top: np.ndarray
    bottom: np.ndarray

    def __post_init__(self):
        for name in ("top", "bottom"):
            v = np.asarray(getattr(self, name), dtype=complex)
            if v.shape != (3,):
                raise ValueError(f"{name} must be a 3-vector, got shape {v.shape}")
            object.__setattr__(self, name, v)

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.top, self.bottom])

    @classmethod
    def from_stacked(cls, v) -> "FieldPair":
        v = np.asarray(v)
        return cls(v[:3], v[3:])


def _kron3(m2: np.ndarray) -> np.ndarray:
    return np.kron(m2, _I3)


def rotate_fields(fp: FieldPair, theta: float) -> FieldPair:
    return FieldPair.from_stacked(_kron3(rotation_matrix(theta)) @ fp.stacked())


def rotate_responses(rs: ResponseSet, theta: float) -> ResponseSet:
    stack = np.einsum("ij,jab->iab", response_transform(theta), rs.stack())
    try:
        return ResponseSet.from_stack(stack, rs.omega)
    except InvalidModelError as exc:
        raise DualitySingularityError(f"rotated medium is degenerate at theta={theta!r}: {exc}") from None


def _noise_frame(rs: ResponseSet) -> np.ndarray:
    return np.block([[_I3, rs.xi], [np.zeros((3, 3)), rs.mu]])


def noise_transform_matrix(rs: ResponseSet, theta: float) -> np.ndarray:
    """6x6 map taking ``(Z0 P_N, mu0 M_N)`` to its rotated counterpart.

    Solves ``N(rs') n' = D(theta) N(rs) n`` with ``N = [[1, xi], [0, mu]]``.
    """
    rotated = rotate_responses(rs, theta)
    lhs = _noise_frame(rotated)
    rhs = _kron3(rotation_matrix(theta)) @ _noise_frame(rs)
    return np.linalg.solve(lhs, rhs)


def rotate_noise(rs: ResponseSet, noise: FieldPair, theta: float) -> FieldPair:
    """Rotate a noise sample ``(Z0 P_N, mu0 M_N)`` consistently with the medium."""
    return FieldPair.from_stacked(noise_transform_matrix(rs, theta) @ noise.stacked())


def rotate_noise_covariance(rs: ResponseSet, cov: np.ndarray, theta: float) -> np.ndarray:
    """Conjugate a covariance of ``(Z0 P_N, mu0 M_N)`` by the noise map."""
    T = noise_transform_matrix(rs, theta)
    return T @ np.asarray(cov) @ T.conj().T


def constitutive_residual(
    rs: ResponseSet, fields: FieldPair, noise: FieldPair, flux: FieldPair, c: float = 1.0
) -> float:
    """Relative defect of ``(Z0 D, B) = (1/c) [[eps, xi], [zeta, mu]] (E, Z0 H) + N (Z0 P, mu0 M)``."""
    C = np.block([[rs.eps, rs.xi], [rs.zeta, rs.mu]])
    predicted = C @ fields.stacked() / c + _noise_frame(rs) @ noise.stacked()
    actual = flux.stacked()
    return float(np.linalg.norm(predicted - actual) / max(np.linalg.norm(actual), 1e-300))


def constitutive_flux(rs: ResponseSet, fields: FieldPair, noise: FieldPair, c: float = 1.0) -> FieldPair:
    C = np.block([[rs.eps, rs.xi], [rs.zeta, rs.mu]])
    return FieldPair.from_stacked(C @ fields.stacked() / c + _noise_frame(rs) @ noise.stacked())


def rotate_green_blocks_vacuum(blocks: GreenBlocks, theta: float) -> GreenBlocks:
    """Free-space transformation of ``(Gee, Gem, Gme, Gmm + I)``."""
    stack = blocks.stack().copy()
    stack[3] = stack[3] + _I3
    out = np.einsum("ij,jab->iab", response_transform(theta), stack)
    out[3] = out[3] - _I3
    return GreenBlocks(*out)


# --------------------------------------------------------------------------
# symmetry classification

WITNESS_ANGLES = (math.pi / 4, math.pi / 7)
DISCRETE_ANGLES = (math.pi / 2, math.pi, 3 * math.pi / 2)


@dataclass(frozen=True)
class SymmetryResult:
    symmetry: str  # "continuous" or "discrete"
    medium_class: MediumClass
    witness_theta: Optional[float] = None
    witness_omega: Optional[complex] = None

    def to_dict(self) -> dict:
        out = {"symmetry": self.symmetry, **self.medium_class.to_dict()}
        out["witness_theta"] = self.witness_theta
        return out


def _closed(rs: ResponseSet, theta: float, tol: float) -> bool:
    before = classify(rs, tol)
    after = classify(rotate_responses(rs, theta), tol)
    return before.symmetry_key() == after.symmetry_key()


def symmetry_class(
    medium: Union[MediumModel, ResponseSet, Iterable[ResponseSet]],
    omega_samples: Optional[Iterable[complex]] = None,
    tol: float = 1e-9,
) -> SymmetryResult:
    """Decide whether a medium's class is closed under all duality rotations.

    The class is that of :func:`mqed.media.classify` (see
    :meth:`MediumClass.symmetry_key`). Closure is probed at pi/4 and pi/7;
    failure there with closure at n pi/2 (n = 1, 2, 3) means discrete
    symmetry and the first failing angle is reported as witness.

    Raises
    ------
    ClassificationError
        If closure fails at a multiple of pi/2, which permutes the response
        slots and can only fail through an assembly error.
    """
    if isinstance(medium, MediumModel):
        if omega_samples is None:
            omega_samples = [medium.reference_frequency()]
        samples = [medium.evaluate(w) for w in omega_samples]
    elif isinstance(medium, ResponseSet):
        samples = [medium]
    else:
        samples = list(medium)
    if not samples:
        raise ValueError("need at least one frequency sample")

    base = classify(samples[0], tol)
    for rs in samples:
        for theta in DISCRETE_ANGLES:
            if not _closed(rs, theta, tol):
                raise ClassificationError(
                    f"class not closed under theta={theta:.6f} at omega={rs.omega!r}"
                )
    for theta in WITNESS_ANGLES:
        for rs in samples:
            if not _closed(rs, theta, tol):
                return SymmetryResult("discrete", base, theta, rs.omega)
    return SymmetryResult("continuous", base)
