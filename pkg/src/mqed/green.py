"""Green tensors of homogeneous media (per wavevector) and of the 1-D
non-local slab, the four-block decomposition and diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conductivity import (
    MediumLike,
    Nonlocal1DKernel,
    curl_k,
    helmholtz_k,
    nonlocal_1d_matrices,
    wavevector,
)
from .constants import SCALED, PhysicalConstants
from .errors import SingularityError
from .media import MediumModel, ResponseSet

_I3 = np.eye(3)

# Reciprocal condition number below which a solve is refused. A lossless
# medium within ~1e-8 relative distance of its light cone lands here.
ON_SHELL_RCOND = 1e-8


@dataclass(frozen=True, eq=False)
class GreenK:
    G: np.ndarray
    M: np.ndarray
    k: np.ndarray
    omega: complex
    right_residual: float
    left_residual: float


@dataclass(frozen=True, eq=False)
class Green1D:
    G: np.ndarray
    H: np.ndarray
    Q: np.ndarray
    kernel: Nonlocal1DKernel
    omega: complex
    residual: float


def _inverse_residuals(M, G, unit):
    n = np.linalg.norm(unit)
    right = float(np.linalg.norm(M @ G - unit) / n)
    left = float(np.linalg.norm(G @ M - unit) / n)
    return right, left


def solve_green_k(
    medium: MediumLike, k, omega=None, const: PhysicalConstants = SCALED
) -> GreenK:
    """Invert the Helmholtz operator at one ``(k, omega)``.

    Raises
    ------
    SingularityError
        If ``M`` is numerically singular, typically because ``(k, omega)``
        sits on the light cone of a lossless medium.
    """
    k = wavevector(k)
    if isinstance(medium, ResponseSet) and omega is None:
        omega = medium.omega
    M = helmholtz_k(medium, k, omega, const)
    s = np.linalg.svd(M, compute_uv=False)
    if not np.all(np.isfinite(s)) or s[0] == 0 or s[-1] / s[0] < ON_SHELL_RCOND:
        raise SingularityError(
            f"Helmholtz operator is singular at k={k.tolist()}, omega={complex(omega)!r}; "
            "use a complex frequency or a lossy model"
        )
    G = np.linalg.solve(M, _I3.astype(complex))
    right, left = _inverse_residuals(M, G, _I3)
    return GreenK(G, M, k, complex(omega), right, left)


def solve_green_1d(kern: Nonlocal1DKernel, omega) -> Green1D:
    """Dense solve of ``H G = I / h``.

    ``H`` is complex symmetric for the even Gaussian kernel; ``G`` is then
    symmetrised so that a lossless problem has ``ImH G = 0`` exactly.
    """
    H, Q = nonlocal_1d_matrices(kern, omega)
    unit = np.eye(kern.n)
    if np.all(H.imag == 0):
        H_solve = H.real
    else:
        H_solve = H
    try:
        G = np.linalg.solve(H_solve, unit) / kern.h
    except np.linalg.LinAlgError as exc:
        raise SingularityError(f"1-D Helmholtz matrix is singular at omega={omega!r}") from exc
    G = G.astype(complex)
    if np.array_equal(H, H.T):
        # the inverse of a complex symmetric matrix is symmetric
        G = 0.5 * (G + G.T)
    residual = float(np.linalg.norm(H @ G - unit / kern.h) / np.linalg.norm(unit / kern.h))
    return Green1D(G, H, Q, kern, complex(omega), residual)


@dataclass(frozen=True, eq=False)
class GreenBlocks:
    Gee: np.ndarray
    Gem: np.ndarray
    Gme: np.ndarray
    Gmm: np.ndarray

    def stack(self) -> np.ndarray:
        return np.stack([self.Gee, self.Gem, self.Gme, self.Gmm])

    def response_matrix(self, rs: ResponseSet) -> np.ndarray:
        """6x6 matrix mapping ``(Z0 P_N, mu0 M_N)`` to ``-(E, Z0 H)/c``.

        The magnetic row is ``mu^-1 (G_me - zeta G_ee)`` and
        ``mu^-1 (G_mm - zeta G_em) + I``: eliminating ``B`` through the
        constitutive relation for ``B`` brings in ``zeta``.
        """
        mi = rs.mu_inv
        top = np.hstack([self.Gee, self.Gem])
        bottom = np.hstack([mi @ (self.Gme - rs.zeta @ self.Gee), mi @ (self.Gmm - rs.zeta @ self.Gem) + _I3])
        return np.vstack([top, bottom])


def green_blocks_k(green: GreenK, const: PhysicalConstants = SCALED) -> GreenBlocks:
    """Electric/magnetic source and observation blocks of a k-space Green tensor."""
    K = curl_k(green.k)
    a = 1j * green.omega / const.c
    G = green.G
    return GreenBlocks(
        Gee=a * G * a,
        Gem=a * (G @ -K),
        Gme=(K @ G) * a,
        Gmm=K @ G @ -K,
    )


def onsager_residual(medium: MediumLike, k, omega=None, const: PhysicalConstants = SCALED) -> float:
    """``||G(-k)^T - G(k)|| / ||G(k)||``; zero for Onsager-reciprocal media."""
    k = wavevector(k)
    if isinstance(medium, ResponseSet) and omega is None:
        omega = medium.omega
    g_plus = solve_green_k(medium, k, omega, const).G
    g_minus = solve_green_k(medium, -k, omega, const).G
    return float(np.linalg.norm(g_minus.T - g_plus) / np.linalg.norm(g_plus))


def asymptote_residual(
    medium: MediumLike, k, omega_large: float, const: PhysicalConstants = SCALED
) -> float:
    """Spectral norm of ``(w/c)^2 G(k, w) + I``, which vanishes as ``w -> inf``."""
    w = float(omega_large)
    g = solve_green_k(medium, k, w, const).G
    return float(np.linalg.norm((w / const.c) ** 2 * g + _I3, 2))


def green_schwarz_residual(
    model: MediumModel, k, omega, const: PhysicalConstants = SCALED
) -> float:
    """Reflection defect ``||G(-k, -w*)* - G(k, w)|| / max(||G(k, w)||, 1)``."""
    k = wavevector(k)
    w = complex(omega)
    a = solve_green_k(model, k, w, const).G
    b = np.conj(solve_green_k(model, -k, -np.conj(w), const).G)
    return float(np.linalg.norm(b - a) / max(np.linalg.norm(a), 1.0))
