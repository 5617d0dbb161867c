"""Local bianisotropic media: response tensors, causal dispersion models,
classification into the standard special cases, and the chirality /
non-reciprocal split of the magnetoelectric tensors.

Conventions
-----------
The constitutive relations are written for the dual pairs
``(Z0 D, B) = (1/c) [[eps, xi], [zeta, mu]] (E, Z0 H)``. The magnetoelectric
tensors decompose as ``xi = chi^T - i kappa^T`` and ``zeta = chi + i kappa``,
where ``kappa`` is the reciprocal (chiral) response and ``chi`` the
non-reciprocal (Tellegen) response.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import InvalidInputError, InvalidModelError

SCHEMA_VERSION = 1
MU_COND_MAX = 1e12
CLASSIFY_TOL = 1e-9

SLOTS = ("eps", "xi", "zeta", "mu")
_I3 = np.eye(3)


def _tensor3(value, label: str) -> np.ndarray:
    a = np.asarray(value, dtype=complex)
    if a.ndim == 0:
        a = a * _I3
    if a.shape != (3, 3):
        raise InvalidInputError(f"{label} must be a 3x3 tensor or a scalar, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{label} contains non-finite entries")
    a = a.copy()
    a.flags.writeable = False
    return a


def _invert_mu(mu: np.ndarray, scale: float) -> np.ndarray:
    # scale-aware: a tiny multiple of I is well conditioned but still degenerate
    s = np.linalg.svd(mu, compute_uv=False)
    if not np.all(np.isfinite(s)) or s[-1] * MU_COND_MAX <= max(s[0], scale):
        bound = s[0] / s[-1] if s[-1] > 0 else np.inf
        raise InvalidModelError(
            f"permeability is singular (condition number {bound:.3e}, smallest singular value {s[-1]:.3e})"
        )
    return np.linalg.inv(mu)


@dataclass(frozen=True, eq=False)
class ResponseSet:
    """The four local response tensors of a medium at one frequency."""

    eps: np.ndarray
    xi: np.ndarray
    zeta: np.ndarray
    mu: np.ndarray
    omega: complex = 1.0

    def __post_init__(self):
        for name in SLOTS:
            object.__setattr__(self, name, _tensor3(getattr(self, name), name))
        object.__setattr__(self, "omega", complex(self.omega))
        self.mu_inv  # validates invertibility eagerly

    @cached_property
    def mu_inv(self) -> np.ndarray:
        inv = _invert_mu(self.mu, max(self.norm(), 1.0))
        inv.flags.writeable = False
        return inv

    @classmethod
    def vacuum(cls, omega: complex = 1.0) -> "ResponseSet":
        return cls(_I3, 0.0, 0.0, _I3, omega)

    @classmethod
    def from_stack(cls, stack, omega: complex = 1.0) -> "ResponseSet":
        stack = np.asarray(stack)
        if stack.shape != (4, 3, 3):
            raise InvalidInputError(f"expected a (4, 3, 3) stack, got {stack.shape}")
        return cls(*stack, omega=omega)

    def stack(self) -> np.ndarray:
        """``(4, 3, 3)`` array ordered ``(eps, xi, zeta, mu)``."""
        return np.stack([self.eps, self.xi, self.zeta, self.mu])

    def norm(self) -> float:
        return float(np.linalg.norm(self.stack()))

    def conj(self) -> "ResponseSet":
        return ResponseSet.from_stack(np.conj(self.stack()), np.conj(self.omega))

    def allclose(self, other: "ResponseSet", atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.stack() - other.stack())) <= atol)


# --------------------------------------------------------------------------
# dispersion models


def _weight(value, label: str) -> np.ndarray:
    w = np.asarray(value, dtype=float)
    if w.ndim == 0:
        w = w * _I3
    elif w.shape == (3,):
        w = np.diag(w)
    if w.shape != (3, 3) or not np.all(np.isfinite(w)):
        raise InvalidInputError(f"{label}: weight must be a real scalar, 3-vector or 3x3 matrix")
    w.flags.writeable = False
    return w


@dataclass(frozen=True, eq=False)
class LorentzTerm:
    """One damped resonance ``amplitude / (resonance^2 - w^2 - i damping w)``.

    ``weight`` distributes the scalar response over tensor components; it
    must be real so that the Schwarz reflection principle survives.
    """

    amplitude: float
    resonance: float
    damping: float
    weight: np.ndarray = field(default_factory=lambda: _weight(1.0, "weight"))

    def __post_init__(self):
        for label in ("amplitude", "resonance", "damping"):
            v = getattr(self, label)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
                raise InvalidInputError(f"{label} must be a finite real number, got {v!r}")
            object.__setattr__(self, label, float(v))
        if self.amplitude < 0:
            raise InvalidInputError(f"amplitude must be >= 0, got {self.amplitude}")
        if self.resonance < 0:
            raise InvalidInputError(f"resonance must be >= 0, got {self.resonance}")
        if self.damping <= 0:
            raise InvalidInputError(
                f"damping must be > 0 for an absorbing medium, got {self.damping}"
            )
        object.__setattr__(self, "weight", _weight(self.weight, "weight"))

    def denominator(self, omega: complex) -> complex:
        d = self.resonance**2 - omega**2 - 1j * self.damping * omega
        if d == 0:
            raise InvalidInputError(f"resonance pole hit exactly at omega={omega!r}")
        return d

    def lorentz(self, omega: complex) -> np.ndarray:
        return (self.amplitude / self.denominator(omega)) * self.weight

    def condon(self, omega: complex) -> np.ndarray:
        # odd in omega: keeps i*kappa Schwarz-symmetric
        return (self.amplitude * omega / self.denominator(omega)) * self.weight

    def to_dict(self) -> dict:
        w = self.weight
        if np.allclose(w, w[0, 0] * _I3, rtol=0, atol=0):
            weight = float(w[0, 0])
        elif np.count_nonzero(w - np.diag(np.diag(w))) == 0:
            weight = [float(x) for x in np.diag(w)]
        else:
            weight = [[float(x) for x in row] for row in w]
        return {
            "amplitude": self.amplitude,
            "resonance": self.resonance,
            "damping": self.damping,
            "weight": weight,
        }


def _sum_terms(terms, omega, kind: str) -> np.ndarray:
    total = np.zeros((3, 3), dtype=complex)
    for term in terms:
        total += term.condon(omega) if kind == "condon" else term.lorentz(omega)
    return total


@dataclass(frozen=True, eq=False)
class MediumModel:
    """Causal parametric model of a homogeneous bianisotropic medium.

    ``eps`` and ``mu`` are ``I`` plus Lorentz sums, ``kappa`` a sum of odd
    Condon resonances and ``chi`` a sum of Lorentz envelopes. ``rotation``
    is an optional orthogonal matrix ``R`` applied as ``R T R^T`` to all four
    responses.
    """

    name: str = "medium"
    eps: tuple = ()
    mu: tuple = ()
    kappa: tuple = ()
    chi: tuple = ()
    rotation: np.ndarray | None = None

    def __post_init__(self):
        for label in ("eps", "mu", "kappa", "chi"):
            terms = tuple(getattr(self, label))
            if not all(isinstance(t, LorentzTerm) for t in terms):
                raise InvalidInputError(f"{label} must be a sequence of LorentzTerm")
            object.__setattr__(self, label, terms)
        if self.rotation is not None:
            R = np.asarray(self.rotation, dtype=float)
            if R.shape != (3, 3) or not np.allclose(R @ R.T, _I3, atol=1e-12):
                raise InvalidInputError("anisotropy.rotation must be a real orthogonal 3x3 matrix")
            R = R.copy()
            R.flags.writeable = False
            object.__setattr__(self, "rotation", R)

    def evaluate(self, omega: complex) -> ResponseSet:
        """Response tensors at complex frequency ``omega`` (``Im omega >= 0``)."""
        omega = complex(omega)
        if omega.imag < 0:
            raise InvalidInputError(f"omega must lie in the closed upper half-plane, got {omega!r}")
        eps = _I3 + _sum_terms(self.eps, omega, "lorentz")
        mu = _I3 + _sum_terms(self.mu, omega, "lorentz")
        kappa = _sum_terms(self.kappa, omega, "condon")
        chi = _sum_terms(self.chi, omega, "lorentz")
        xi, zeta = recompose_magnetoelectric(kappa, chi)
        if self.rotation is not None:
            R = self.rotation
            eps, xi, zeta, mu = (R @ t @ R.T for t in (eps, xi, zeta, mu))
        try:
            return ResponseSet(eps, xi, zeta, mu, omega)
        except InvalidModelError as exc:
            raise InvalidModelError(f"{self.name}: {exc} at omega={omega!r}") from None

    def resonances(self) -> list[float]:
        return sorted(t.resonance for t in (*self.eps, *self.mu, *self.kappa, *self.chi))

    def reference_frequency(self) -> float:
        """Lowest non-zero resonance, or 1 for vacuum-like models."""
        positive = [w for w in self.resonances() if w > 0]
        return positive[0] if positive else 1.0

    def highest_resonance(self) -> float:
        res = self.resonances()
        return max(res) if res and max(res) > 0 else 1.0

    # -- serialisation ----------------------------------------------------

    def to_dict(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION, "name": self.name}
        for label in ("eps", "mu", "kappa", "chi"):
            out[label] = [t.to_dict() for t in getattr(self, label)]
        if self.rotation is not None:
            out["anisotropy"] = {"rotation": [[float(x) for x in row] for row in self.rotation]}
        return out

    @classmethod
    def from_dict(cls, doc) -> "MediumModel":
        return _parse_model(doc)

    @classmethod
    def from_json(cls, text: str, source: str = "<string>") -> "MediumModel":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelParseError(
                f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}",
                line=exc.lineno,
                column=exc.colno,
            ) from None
        try:
            return _parse_model(doc)
        except ModelParseError as exc:
            raise ModelParseError(f"{source}: {exc}") from None

    @classmethod
    def load(cls, path) -> "MediumModel":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ModelParseError(f"{path}: cannot read model file: {exc.strerror}") from None
        return cls.from_json(text, source=str(path))


class ModelParseError(InvalidInputError):
    """Model file could not be parsed; ``line``/``column`` set for JSON syntax errors."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


_MODEL_KEYS = {"schema_version", "name", "eps", "mu", "kappa", "chi", "anisotropy"}
_TERM_KEYS = {"amplitude", "resonance", "damping", "weight"}


def _parse_model(doc) -> MediumModel:
    if not isinstance(doc, dict):
        raise ModelParseError("model document must be a JSON object")
    unknown = sorted(set(doc) - _MODEL_KEYS)
    if unknown:
        raise ModelParseError(f"unknown key(s) {unknown}")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ModelParseError(f"unsupported schema_version {version!r}")
    name = doc.get("name", "medium")
    if not isinstance(name, str):
        raise ModelParseError("'name' must be a string")
    kwargs = {"name": name}
    for label in ("eps", "mu", "kappa", "chi"):
        raw = doc.get(label, [])
        if not isinstance(raw, list):
            raise ModelParseError(f"'{label}' must be a list of terms")
        terms = []
        for i, item in enumerate(raw):
            where = f"{label}[{i}]"
            if not isinstance(item, dict):
                raise ModelParseError(f"{where}: term must be an object")
            extra = sorted(set(item) - _TERM_KEYS)
            if extra:
                raise ModelParseError(f"{where}: unknown key(s) {extra}")
            missing = sorted({"amplitude", "resonance", "damping"} - set(item))
            if missing:
                raise ModelParseError(f"{where}: missing key(s) {missing}")
            try:
                terms.append(LorentzTerm(**item))
            except (InvalidInputError, TypeError, ValueError) as exc:
                raise ModelParseError(f"{where}: {exc}") from None
        kwargs[label] = tuple(terms)
    aniso = doc.get("anisotropy")
    if aniso is not None:
        if not isinstance(aniso, dict) or set(aniso) - {"rotation"}:
            raise ModelParseError("'anisotropy' must be an object with only a 'rotation' key")
        if "rotation" in aniso:
            kwargs["rotation"] = aniso["rotation"]
    try:
        return MediumModel(**kwargs)
    except (InvalidInputError, ValueError) as exc:
        raise ModelParseError(str(exc)) from None


# --------------------------------------------------------------------------
# magnetoelectric split


def decompose_magnetoelectric(rs: ResponseSet) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(kappa, chi)`` with ``kappa = (zeta - xi^T)/2i`` and ``chi = (zeta + xi^T)/2``."""
    kappa = (rs.zeta - rs.xi.T) / 2j
    chi = 0.5 * (rs.zeta + rs.xi.T)
    return kappa, chi


def recompose_magnetoelectric(kappa, chi) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`decompose_magnetoelectric`: ``(xi, zeta)``."""
    kappa = np.asarray(kappa, dtype=complex)
    chi = np.asarray(chi, dtype=complex)
    return chi.T - 1j * kappa.T, chi + 1j * kappa


# --------------------------------------------------------------------------
# classification

KINDS = ("vacuum", "isotropic", "biisotropic", "anisotropic", "bianisotropic")


@dataclass(frozen=True)
class MediumClass:
    kind: str
    reciprocal: bool
    nonreciprocal_magnetoelectric: bool

    def symmetry_key(self) -> tuple:
        """The named class whose closure under duality decides the symmetry type.

        For the four special kinds the kind alone is decisive. A generic
        bianisotropic medium is always closed, so reciprocity becomes the
        distinguishing structure there.
        """
        if self.kind == "bianisotropic":
            return (self.kind, self.reciprocal)
        return (self.kind,)

    def to_dict(self) -> dict:
        return {
            "class": self.kind,
            "reciprocal": self.reciprocal,
            "nonreciprocal_magnetoelectric": self.nonreciprocal_magnetoelectric,
        }


def _is_scalar(a: np.ndarray, atol: float) -> bool:
    return np.linalg.norm(a - (np.trace(a) / 3.0) * _I3) <= atol


def classify(rs: ResponseSet, tol: float = CLASSIFY_TOL) -> MediumClass:
    """Assign ``rs`` to vacuum / isotropic / biisotropic / anisotropic / bianisotropic.

    All predicates are evaluated to ``tol * ||rs||``.
    """
    atol = tol * max(rs.norm(), 1.0)
    no_me = np.linalg.norm(rs.xi) <= atol and np.linalg.norm(rs.zeta) <= atol
    eps_s = _is_scalar(rs.eps, atol)
    mu_s = _is_scalar(rs.mu, atol)
    if no_me and np.linalg.norm(rs.eps - _I3) <= atol and np.linalg.norm(rs.mu - _I3) <= atol:
        kind = "vacuum"
    elif no_me and eps_s and mu_s:
        kind = "isotropic"
    elif no_me:
        kind = "anisotropic"
    elif eps_s and mu_s and _is_scalar(rs.xi, atol) and _is_scalar(rs.zeta, atol):
        kind = "biisotropic"
    else:
        kind = "bianisotropic"
    reciprocal = bool(
        np.linalg.norm(rs.eps - rs.eps.T) <= atol
        and np.linalg.norm(rs.mu - rs.mu.T) <= atol
        and np.linalg.norm(rs.xi.T + rs.zeta) <= atol
    )
    _, chi = decompose_magnetoelectric(rs)
    return MediumClass(kind, reciprocal, bool(np.linalg.norm(chi) > atol))


# --------------------------------------------------------------------------
# Schwarz reflection

ModelLike = Union[MediumModel, Callable[[complex], ResponseSet]]


def _evaluator(model: ModelLike) -> Callable[[complex], ResponseSet]:
    return model.evaluate if isinstance(model, MediumModel) else model


def schwarz_check(model: ModelLike, omega_grid: Iterable[complex]) -> float:
    """Max over the grid of ``||R(-w*)* - R(w)||`` across all four response slots.

    ``model`` may be a :class:`MediumModel` or any callable ``omega -> ResponseSet``.
    """
    evaluate = _evaluator(model)
    worst = 0.0
    for w in omega_grid:
        w = complex(w)
        a = evaluate(w).stack()
        b = np.conj(evaluate(-np.conj(w)).stack())
        worst = max(worst, float(np.max(np.linalg.norm(a - b, axis=(1, 2)))))
    return worst


def default_omega_grid(model: MediumModel, count: int = 50, span: Sequence[float] = (0.1, 10.0)):
    """``count`` log-spaced real frequencies over ``span`` times the lowest resonance."""
    w0 = model.reference_frequency()
    return np.geomspace(span[0] * w0, span[1] * w0, count)
