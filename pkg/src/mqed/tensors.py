"""Dense complex tensor algebra shared by all modules.

Generalised real and imaginary parts, Hermiticity and positive
semidefiniteness checks, and the principal Hermitian square root.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError, NotPSDError

TOL_HERM = 1e-10
TOL_PSD = 1e-10


def as_square(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InvalidInputError(f"expected a non-empty square matrix, got shape {A.shape}")
    return A


def dagger(A: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(A, -1, -2))


def hermitian_part(A) -> np.ndarray:
    """Generalised real part ``(A + A^dagger) / 2``.

    For a discretised two-point kernel the conjugate transpose of the whole
    matrix swaps the two points, transposes and conjugates at once.
    """
    A = as_square(A)
    return 0.5 * (A + dagger(A))


def antihermitian_part(A) -> np.ndarray:
    """Generalised imaginary part ``(A - A^dagger) / 2i``; the result is Hermitian."""
    A = as_square(A)
    return (A - dagger(A)) / 2j


def hermiticity_defect(A) -> float:
    """``||A - A^dagger|| / ||A||`` (zero for the zero matrix)."""
    A = as_square(A)
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(A - dagger(A)) / scale)


def is_hermitian(A, tol: float = TOL_HERM) -> bool:
    return hermiticity_defect(A) <= tol


def _check_hermitian(A, tol):
    defect = hermiticity_defect(A)
    if defect > tol:
        raise InvalidInputError(f"matrix is not Hermitian: relative defect {defect:.3e} > {tol:.1e}")


class PSDReport(NamedTuple):
    is_psd: bool
    min_eigenvalue: float

    def __bool__(self):
        return self.is_psd


def is_psd(A, tol: float = 1e-12, tol_herm: float = TOL_HERM) -> PSDReport:
    """Test ``min eig(A) >= -tol`` for a Hermitian ``A``.

    ``tol`` is absolute. The minimum eigenvalue is always reported.
    """
    A = as_square(A)
    _check_hermitian(A, tol_herm)
    lam_min = float(np.linalg.eigvalsh(hermitian_part(A))[0])
    return PSDReport(lam_min >= -tol, lam_min)


def psd_root(A, tol_psd: float = TOL_PSD, tol_herm: float = TOL_HERM) -> np.ndarray:
    """Principal Hermitian square root ``R`` with ``R @ R^dagger = A``.

    Parameters
    ----------
    A : (n, n) array_like
        Hermitian positive semidefinite matrix.
    tol_psd : float
        Eigenvalues down to ``-tol_psd * max|lambda|`` are treated as roundoff
        and clipped to zero.
    tol_herm : float
        Allowed relative Hermiticity defect of ``A``.

    Returns
    -------
    ndarray
        ``V diag(sqrt(max(lambda, 0))) V^dagger``.

    Raises
    ------
    InvalidInputError
        If ``A`` is not Hermitian to ``tol_herm``.
    NotPSDError
        If an eigenvalue lies below the clipping threshold.
    """
    A = as_square(A)
    _check_hermitian(A, tol_herm)
    lam, V = np.linalg.eigh(hermitian_part(A))
    scale = float(np.max(np.abs(lam)))
    if lam[0] < -tol_psd * scale:
        raise NotPSDError("matrix is not positive semidefinite", float(lam[0]))
    root = np.sqrt(np.clip(lam, 0.0, None))
    return (V * root) @ dagger(V)


def cross_matrix(v) -> np.ndarray:
    """Matrix ``[v]_x`` with ``[v]_x @ w == cross(v, w)``."""
    v = np.asarray(v)
    if v.shape != (3,):
        raise InvalidInputError(f"expected a 3-vector, got shape {v.shape}")
    z = np.zeros((), dtype=v.dtype)
    return np.array(
        [[z, -v[2], v[1]], [v[2], z, -v[0]], [-v[1], v[0], z]],
        dtype=np.result_type(v.dtype, float),
    )


def rel_residual(A, B, floor: float = 1e-300) -> float:
    """``||A - B|| / max(||B||, floor)`` in the Frobenius norm."""
    return float(np.linalg.norm(np.asarray(A) - np.asarray(B)) / max(np.linalg.norm(B), floor))
