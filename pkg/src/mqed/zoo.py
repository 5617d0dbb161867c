"""Shipped medium fixtures and a random passive response generator."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .constants import SCALED, PhysicalConstants
from .media import MediumModel, ResponseSet, recompose_magnetoelectric

FIXTURE_NAMES = (
    "vacuum",
    "lorentz_dielectric",
    "lorentz_magnetic",
    "uniaxial_dielectric",
    "chiral",
    "tellegen",
    "tellegen_uniaxial",
    "reciprocal_bianisotropic",
)

# every shipped fixture is absorbing and passive on its default grid
PASSIVE_FIXTURES = FIXTURE_NAMES


def fixture_path(name: str):
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")
    return resources.files("mqed") / "fixtures" / f"{name}.json"


def load_fixture(name: str) -> MediumModel:
    path = fixture_path(name)
    return MediumModel.from_json(path.read_text(encoding="utf-8"), source=f"fixture:{name}")


def all_fixtures() -> dict[str, MediumModel]:
    return {name: load_fixture(name) for name in FIXTURE_NAMES}


def _hermitian(rng, scale=1.0):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return scale * 0.5 * (a + a.conj().T)


def _positive(rng, floor=0.05, scale=1.0):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return scale * (a @ a.conj().T) / 3 + floor * np.eye(3)


def random_passive_response(
    rng: np.random.Generator,
    omega: float | None = None,
    coupling: float = 0.4,
    const: PhysicalConstants = SCALED,
) -> ResponseSet:
    """Draw a fully bianisotropic response set whose noise covariance is PSD.

    ``mu^-1`` is drawn with a negative definite generalised imaginary part,
    ``xi`` and ``zeta`` freely, and the lossy part of ``eps`` is then chosen
    to dominate the Schur complement of the magnetic block.
    """
    if omega is None:
        omega = float(rng.uniform(0.2, 3.0))
    mu_inv = np.eye(3) + _hermitian(rng, 0.15) - 1j * _positive(rng, scale=0.2)
    mu = np.linalg.inv(mu_inv)
    mu_inv = np.linalg.inv(mu)
    kappa = coupling * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    chi = coupling * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    xi, zeta = recompose_magnetoelectric(kappa, chi)

    mm = -(mu_inv - mu_inv.conj().T) / 2j / const.mu0
    pm = (xi @ mu_inv - zeta.conj().T @ mu_inv.conj().T) / (2j * const.Z0)
    schur = pm @ np.linalg.solve(mm, pm.conj().T)
    schur = 0.5 * (schur + schur.conj().T)
    loss = (schur + _positive(rng, scale=0.3)) / const.eps0
    eps = xi @ mu_inv @ zeta + np.eye(3) + _hermitian(rng, 0.5) + 1j * loss
    return ResponseSet(eps, xi, zeta, mu, omega)


def random_response(rng: np.random.Generator, omega: float | None = None) -> ResponseSet:
    """Generic (not necessarily passive) response set with well-conditioned ``mu``."""
    if omega is None:
        omega = float(rng.uniform(0.2, 3.0))

    def r(scale):
        return scale * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))

    return ResponseSet(np.eye(3) + r(0.5), r(0.3), r(0.3), np.eye(3) + r(0.2), omega)
