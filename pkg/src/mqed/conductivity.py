"""Ohm-law kernels and the Helmholtz operators built from them.

k-space conventions: a left-acting curl becomes ``K = [ik]_x``; a curl
acting to the right on the second argument of a kernel becomes ``-K``
multiplied from the right. With these signs the conductivity of a local
bianisotropic medium reproduces the bianisotropic Helmholtz operator
exactly (see :func:`equivalence_residual`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .constants import SCALED, PhysicalConstants
from .errors import InvalidInputError, ResolutionError
from .media import MediumModel, ResponseSet
from .tensors import cross_matrix, hermitian_part

_I3 = np.eye(3)


def wavevector(k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.shape != (3,) or not np.all(np.isfinite(k)):
        raise InvalidInputError(f"k must be a finite real 3-vector, got {k!r}")
    return k


def curl_k(k) -> np.ndarray:
    """k-space image ``[ik]_x`` of a left-acting curl."""
    return cross_matrix(1j * wavevector(k))


def resolve_omega(rs: ResponseSet, omega) -> complex:
    if omega is None:
        return rs.omega
    omega = complex(omega)
    if abs(omega - rs.omega) > 1e-13 * max(abs(omega), 1.0):
        raise InvalidInputError(
            f"ResponseSet was evaluated at omega={rs.omega!r}, not at omega={omega!r}"
        )
    return omega


class ConductivityK:
    """Producer ``(k, omega) -> Q(k, omega)`` of a homogeneous medium.

    Use :meth:`local` for a bianisotropic medium; any callable returning a
    3x3 tensor (e.g. a hydrodynamic ``k``-dependent closure) can be wrapped
    directly.
    """

    def __init__(self, func: Callable[[np.ndarray, complex], np.ndarray], name: str = "Q"):
        self._func = func
        self.name = name

    def __call__(self, k, omega) -> np.ndarray:
        q = np.asarray(self._func(wavevector(k), complex(omega)), dtype=complex)
        if q.shape != (3, 3):
            raise InvalidInputError(f"conductivity producer returned shape {q.shape}")
        return q

    def __repr__(self):
        return f"ConductivityK({self.name!r})"

    @classmethod
    def local(cls, medium: Union[MediumModel, ResponseSet], const: PhysicalConstants = SCALED):
        if isinstance(medium, MediumModel):
            return cls(
                lambda k, w: local_conductivity_k(medium.evaluate(w), k, w, const),
                name=f"local:{medium.name}",
            )
        if isinstance(medium, ResponseSet):
            return cls(lambda k, w: local_conductivity_k(medium, k, w, const), name="local")
        raise InvalidInputError(f"cannot build a conductivity from {type(medium).__name__}")


def local_conductivity_k(
    rs: ResponseSet, k, omega=None, const: PhysicalConstants = SCALED
) -> np.ndarray:
    """Fourier-space conductivity of a local bianisotropic medium.

    ``Q = (i mu0 w)^-1 K (I - mu^-1) K + Z0^-1 (K mu^-1 zeta - xi mu^-1 K)
    - i eps0 w (eps - xi mu^-1 zeta - I)``
    """
    w = resolve_omega(rs, omega)
    K = curl_k(k)
    mi = rs.mu_inv
    magnetic = _I3 - mi
    if np.any(magnetic != 0):
        if w == 0:
            raise InvalidInputError("magnetic conductivity is undefined at omega = 0")
        q = (K @ magnetic @ K) / (1j * const.mu0 * w)
    else:
        q = np.zeros((3, 3), dtype=complex)
    q = q + (K @ mi @ rs.zeta - rs.xi @ mi @ K) / const.Z0
    q = q - 1j * const.eps0 * w * (rs.eps - rs.xi @ mi @ rs.zeta - _I3)
    return q


def helmholtz_generic_k(Q, k, omega, const: PhysicalConstants = SCALED) -> np.ndarray:
    """``M = (k^2 I - k k) - (w/c)^2 I - i mu0 w Q(k, w)``.

    ``Q`` is either a :class:`ConductivityK` or an already evaluated 3x3 tensor.
    """
    k = wavevector(k)
    w = complex(omega)
    q = Q(k, w) if callable(Q) else np.asarray(Q, dtype=complex)
    return (k @ k) * _I3 - np.outer(k, k) - (w / const.c) ** 2 * _I3 - 1j * const.mu0 * w * q


def helmholtz_bianisotropic_k(
    rs: ResponseSet, k, omega=None, const: PhysicalConstants = SCALED
) -> np.ndarray:
    """``K mu^-1 K - (iw/c) K mu^-1 zeta + (iw/c) xi mu^-1 K - (w/c)^2 (eps - xi mu^-1 zeta)``."""
    w = resolve_omega(rs, omega)
    K = curl_k(k)
    mi = rs.mu_inv
    a = 1j * w / const.c
    return (
        K @ mi @ K
        - a * (K @ mi @ rs.zeta)
        + a * (rs.xi @ mi @ K)
        - (w / const.c) ** 2 * (rs.eps - rs.xi @ mi @ rs.zeta)
    )


MediumLike = Union[MediumModel, ResponseSet, ConductivityK]


def helmholtz_k(medium: MediumLike, k, omega=None, const: PhysicalConstants = SCALED):
    if isinstance(medium, ResponseSet):
        return helmholtz_bianisotropic_k(medium, k, omega, const)
    if omega is None:
        raise InvalidInputError("omega is required for models and conductivity producers")
    if isinstance(medium, MediumModel):
        return helmholtz_bianisotropic_k(medium.evaluate(omega), k, omega, const)
    if isinstance(medium, ConductivityK):
        return helmholtz_generic_k(medium, k, omega, const)
    raise InvalidInputError(f"unsupported medium type {type(medium).__name__}")


def conductivity_k(medium: MediumLike, k, omega=None, const: PhysicalConstants = SCALED):
    if isinstance(medium, ResponseSet):
        return local_conductivity_k(medium, k, omega, const)
    if omega is None:
        raise InvalidInputError("omega is required for models and conductivity producers")
    if isinstance(medium, MediumModel):
        return local_conductivity_k(medium.evaluate(omega), k, omega, const)
    if isinstance(medium, ConductivityK):
        return medium(k, omega)
    raise InvalidInputError(f"unsupported medium type {type(medium).__name__}")


def equivalence_residual(rs: ResponseSet, k, omega=None, const: PhysicalConstants = SCALED):
    """Relative mismatch between the bianisotropic and the conductivity route to ``M``."""
    w = resolve_omega(rs, omega)
    m_bi = helmholtz_bianisotropic_k(rs, k, w, const)
    m_gen = helmholtz_generic_k(local_conductivity_k(rs, k, w, const), k, w, const)
    return float(np.linalg.norm(m_bi - m_gen) / np.linalg.norm(m_bi))


def conductivity_schwarz_residual(
    model: MediumModel, k, omega, const: PhysicalConstants = SCALED
) -> float:
    """Reflection defect ``||Q(-k, -w*)* - Q(k, w)|| / max(||Q(k, w)||, 1)``.

    The real-space statement ``Q(r, r', -w*)* = Q(r, r', w)`` maps to a
    simultaneous ``k -> -k`` in Fourier space.
    """
    k = wavevector(k)
    w = complex(omega)
    a = conductivity_k(model, k, w, const)
    b = np.conj(conductivity_k(model, -k, -np.conj(w), const))
    return float(np.linalg.norm(b - a) / max(np.linalg.norm(a), 1.0))


# --------------------------------------------------------------------------
# non-local 1-D medium


@dataclass(frozen=True)
class Nonlocal1DKernel:
    """Gaussian-smeared Drude conductivity on a Dirichlet box ``(0, length)``.

    Fields are polarised along y and vary along x. The ``n`` interior grid
    points are ``x_i = i h`` with ``h = length / (n + 1)``.
    """

    n: int = 64
    length: float = 10.0
    ell: float = 1.0
    plasma_frequency: float = 1.0
    damping: float = 0.1
    const: PhysicalConstants = SCALED

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 16:
            raise InvalidInputError(f"n must be an integer >= 16, got {self.n!r}")
        if not self.length > 0:
            raise InvalidInputError(f"length must be positive, got {self.length!r}")
        if self.plasma_frequency < 0:
            raise InvalidInputError("plasma_frequency must be >= 0")
        if not self.damping > 0:
            raise InvalidInputError("damping must be > 0")
        if not self.ell >= 2 * self.h:
            raise ResolutionError(
                f"smoothing length {self.ell!r} is not resolved: need ell >= 2h = {2 * self.h:.6g}"
            )

    @property
    def h(self) -> float:
        return self.length / (self.n + 1)

    @property
    def x(self) -> np.ndarray:
        return self.h * np.arange(1, self.n + 1)

    def sigma(self, omega) -> complex:
        """Drude conductivity ``eps0 wp^2 / (gamma - i w)``."""
        w = complex(omega)
        return self.const.eps0 * self.plasma_frequency**2 / (self.damping - 1j * w)

    def gram(self) -> np.ndarray:
        """``g(x_i - x_j) h`` with a unit-normalised Gaussian ``g``."""
        d = self.x[:, None] - self.x[None, :]
        g = np.exp(-0.5 * (d / self.ell) ** 2) / (np.sqrt(2 * np.pi) * self.ell)
        return g * self.h

    def q_matrix(self, omega) -> np.ndarray:
        return self.sigma(omega) * self.gram()

    def second_difference(self) -> np.ndarray:
        n = self.n
        d2 = -2.0 * np.eye(n) + np.eye(n, k=1) + np.eye(n, k=-1)
        return d2 / self.h**2


def nonlocal_1d_matrices(kern: Nonlocal1DKernel, omega) -> tuple[np.ndarray, np.ndarray]:
    """Discrete Helmholtz operator and conductivity matrix ``(H, Q)``.

    ``H = -D2 - (w/c)^2 I - i mu0 w Q`` where ``Q`` already carries the
    quadrature weight ``h``.
    """
    w = complex(omega)
    c = kern.const
    Q = kern.q_matrix(w)
    H = -kern.second_difference() - (w / c.c) ** 2 * np.eye(kern.n) - 1j * c.mu0 * w * Q
    return H, Q


def dissipative_part_1d(kern: Nonlocal1DKernel, omega) -> np.ndarray:
    return hermitian_part(kern.q_matrix(omega))
