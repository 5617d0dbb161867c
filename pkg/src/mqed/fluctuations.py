"""Covariance-level quantisation.

Operators are represented by their commutator kernels. The noise-current
commutator and the ground-state anticommutator share one kernel:

    [j_N(k, w), j_N^dagger(k, w')]  = (hbar w / pi) ReH Q(k, w) delta(w - w')
    <{dj_N(k, w), dj_N^dagger(k, w')}> = (hbar / pi) ImH[i w Q(k, w)] delta(w - w')

and ``ImH[i w Q] == w ReH Q`` at real ``w``. Electric-field fluctuations
follow as ``(hbar / pi) ImH[mu0 w^2 G]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .conductivity import MediumLike, Nonlocal1DKernel, conductivity_k, curl_k
from .constants import SCALED, PhysicalConstants
from .errors import ConsistencyError, InvalidInputError, NonPassiveMediumError, NotPSDError
from .green import Green1D, GreenK, solve_green_1d, solve_green_k
from .media import ResponseSet
from .tensors import antihermitian_part, dagger, hermitian_part, psd_root

PSD_RTOL = 1e-10


def _real_positive(omega) -> float:
    w = complex(omega)
    if w.imag != 0 or not w.real > 0:
        raise InvalidInputError(f"fluctuation spectra need a real omega > 0, got {omega!r}")
    return w.real


def current_covariance_k(
    medium: MediumLike, k, omega, const: PhysicalConstants = SCALED
) -> np.ndarray:
    """Noise-current kernel ``(hbar w / pi) ReH Q(k, w)``."""
    w = _real_positive(omega)
    return (const.hbar * w / math.pi) * hermitian_part(conductivity_k(medium, k, w, const))


def noise_pm_covariance(rs: ResponseSet, omega=None, const: PhysicalConstants = SCALED) -> np.ndarray:
    """6x6 commutator kernel of ``(P_N, M_N)`` in units of ``hbar / pi``.

    Blocks::

        PP =  eps0 ImH(eps - xi mu^-1 zeta)
        PM = (xi mu^-1 - zeta^dagger mu^-dagger) / (2i Z0)
        MP =  PM^dagger
        MM = -ImH(mu^-1) / mu0

    The sign of the mixed blocks is the one for which ``j_N = -i w P_N +
    curl M_N`` reproduces ``w ReH Q`` (see :func:`current_covariance_from_noise`).

    For ``xi = zeta = 0`` the mixed blocks vanish identically.
    """
    w = rs.omega if omega is None else complex(omega)
    _real_positive(w)
    mi = rs.mu_inv
    pp = const.eps0 * antihermitian_part(rs.eps - rs.xi @ mi @ rs.zeta)
    pm = (rs.xi @ mi - dagger(rs.zeta) @ dagger(mi)) / (2j * const.Z0)
    mm = -antihermitian_part(mi) / const.mu0
    C = np.block([[pp, pm], [dagger(pm), mm]])
    return hermitian_part(C)


def noise_root(rs: ResponseSet, omega=None, const: PhysicalConstants = SCALED) -> np.ndarray:
    """Hermitian root ``R`` of :func:`noise_pm_covariance` with ``R R^dagger = C``.

    Raises
    ------
    NonPassiveMediumError
        If the covariance has an eigenvalue below ``-1e-10 ||C||``; the
        bosonic map then does not exist for this medium.
    """
    C = noise_pm_covariance(rs, omega, const)
    try:
        return psd_root(C, tol_psd=PSD_RTOL)
    except NotPSDError as exc:
        raise NonPassiveMediumError(
            f"noise covariance is not positive semidefinite at omega={rs.omega!r}",
            exc.min_eigenvalue,
        ) from None


def noise_to_current(k, omega) -> np.ndarray:
    """3x6 map ``(P_N, M_N) -> j_N = -i w P_N + [ik]_x M_N``."""
    w = complex(omega)
    return np.hstack([-1j * w * np.eye(3), curl_k(k)])


def current_covariance_from_noise(
    rs: ResponseSet, k, omega=None, const: PhysicalConstants = SCALED
) -> np.ndarray:
    """Current kernel ``(hbar/pi) J C J^dagger`` assembled from the P/M noise."""
    w = rs.omega if omega is None else complex(omega)
    J = noise_to_current(k, w)
    return (const.hbar / math.pi) * (J @ noise_pm_covariance(rs, w, const) @ dagger(J))


LOSSLESS_RTOL = 1e-12


def _relative_defect(diff, ref, scale) -> float:
    """``||diff|| / ||ref||``, or ``/ ||scale||`` once ``ref`` is rounding noise.

    A lossless medium has ``ImH G = 0``; what is left is roundoff of order
    ``eps ||G||`` and a ratio against it carries no information.
    """
    d = float(np.linalg.norm(diff))
    r = float(np.linalg.norm(ref))
    s = float(np.linalg.norm(scale))
    if r > LOSSLESS_RTOL * s:
        return d / r
    return d / s if s > 0 else d


def integral_relation_residual_k(
    medium: MediumLike, k, omega, const: PhysicalConstants = SCALED
) -> float:
    """Defect of ``mu0 w G ReH(Q) G^dagger = ImH(G)`` at one ``(k, w)``.

    Relative to ``||ImH G||``; relative to ``||G||`` when the medium is
    lossless to working precision (``||ImH G|| <= 1e-12 ||G||``).
    """
    w = _real_positive(omega)
    g = solve_green_k(medium, k, w, const).G
    q = conductivity_k(medium, k, w, const)
    lhs = const.mu0 * w * g @ hermitian_part(q) @ dagger(g)
    rhs = antihermitian_part(g)
    return _relative_defect(lhs - rhs, rhs, g)


def integral_relation_residual_1d(kern: Nonlocal1DKernel, omega) -> float:
    """Discrete defect of ``mu0 w h G ReH(Q) G^dagger = ImH(G)``.

    ``G`` approximates the continuum kernel, so the double integral over
    intermediate points carries one factor ``h`` beyond the weight that
    ``Q`` already holds.
    """
    w = _real_positive(omega)
    green = solve_green_1d(kern, w)
    G = green.G
    lhs = kern.const.mu0 * w * kern.h * G @ hermitian_part(green.Q) @ dagger(G)
    rhs = antihermitian_part(G)
    return _relative_defect(lhs - rhs, rhs, G)


def _spectrum_scale(A, w, const):
    return (const.hbar * const.mu0 * w**2 / math.pi) * A


@dataclass(frozen=True, eq=False)
class FieldSpectrum:
    S: np.ndarray
    omega: float
    min_eigenvalue: float

    @property
    def trace(self) -> float:
        return float(np.trace(self.S).real)


def field_fluctuation_spectrum(
    green: Union[GreenK, Green1D, np.ndarray],
    omega=None,
    const: PhysicalConstants = SCALED,
) -> FieldSpectrum:
    """Electric-field spectrum ``(hbar mu0 w^2 / pi) ImH(G)``.

    Raises
    ------
    ConsistencyError
        If the spectrum has an eigenvalue below ``-1e-10 (hbar mu0 w^2/pi) ||G||``.
    """
    if isinstance(green, (GreenK, Green1D)):
        G = green.G
        omega = green.omega if omega is None else omega
        if isinstance(green, Green1D):
            const = green.kernel.const
    else:
        G = np.asarray(green, dtype=complex)
    if omega is None:
        raise InvalidInputError("omega is required with a bare Green matrix")
    w = _real_positive(omega)
    S = _spectrum_scale(antihermitian_part(G), w, const)
    lam_min = float(np.linalg.eigvalsh(S)[0])
    # rounding in ImH(G) is set by |G|, not by |S| (which may vanish)
    if lam_min < -PSD_RTOL * float(np.linalg.norm(_spectrum_scale(G, w, const))):
        raise ConsistencyError(
            f"field spectrum is not positive semidefinite (min eigenvalue {lam_min:.3e})"
        )
    return FieldSpectrum(S, w, lam_min)


def field_spectrum_via_dissipation_k(
    medium: MediumLike, k, omega, const: PhysicalConstants = SCALED
) -> np.ndarray:
    """Second route: ``(hbar/pi) mu0^2 w^3 G ReH(Q) G^dagger``."""
    w = _real_positive(omega)
    g = solve_green_k(medium, k, w, const).G
    q = conductivity_k(medium, k, w, const)
    return (const.hbar / math.pi) * const.mu0**2 * w**3 * (g @ hermitian_part(q) @ dagger(g))


def field_spectrum_via_dissipation_1d(kern: Nonlocal1DKernel, omega) -> np.ndarray:
    w = _real_positive(omega)
    c = kern.const
    green = solve_green_1d(kern, w)
    G = green.G
    return (c.hbar / math.pi) * c.mu0**2 * w**3 * kern.h * (G @ hermitian_part(green.Q) @ dagger(G))


def spectrum_route_residual_k(medium: MediumLike, k, omega, const: PhysicalConstants = SCALED) -> float:
    """Relative disagreement of the two spectrum routes (normalised as above)."""
    w = _real_positive(omega)
    green = solve_green_k(medium, k, w, const)
    direct = field_fluctuation_spectrum(green, const=const).S
    other = field_spectrum_via_dissipation_k(medium, k, w, const)
    return _relative_defect(direct - other, direct, _spectrum_scale(green.G, w, const))


def spectrum_route_residual_1d(kern: Nonlocal1DKernel, omega) -> float:
    green = solve_green_1d(kern, omega)
    direct = field_fluctuation_spectrum(green).S
    other = field_spectrum_via_dissipation_1d(kern, omega)
    return _relative_defect(direct - other, direct, _spectrum_scale(green.G, green.omega, kern.const))
