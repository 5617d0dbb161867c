"""Verification suites run by ``mqed verify``.

Every suite evaluates one medium model over documented default grids and
returns a :class:`VerificationReport`. Records aggregate a check over its
grid: the residual is the worst value found and ``parameters`` names the
point where it occurred.

Default grids (``w0`` = lowest resonance of the model, 1 if none):

* omega: 50 log-spaced points over ``[0.1, 10] w0`` (100 for ``schwarz``)
* k: ``0.7 w0 / c`` along x, y, z and ``(1, 2, 3)/sqrt(14)``
* fdt: 20 x 20 grid, ``omega`` over ``[0.1, 10] w0`` and the index
  ``n = |k| c / omega`` over ``[0.1, 10]`` shifted by a quarter log step so
  no point sits on the vacuum light cone; ``k`` along ``(1, 2, 3)/sqrt(14)``
* onsager witness: ``k = (0.3, 0.5, 0.7) w0 / c``, ``omega = 0.8 w0``
* asymptote: 10 log-spaced points over ``[1e3, 1e4]`` times the highest resonance
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from . import duality as dual
from .conductivity import conductivity_schwarz_residual, equivalence_residual
from .constants import SCALED, PhysicalConstants
from .errors import ConsistencyError, DualitySingularityError
from .fluctuations import (
    field_fluctuation_spectrum,
    integral_relation_residual_k,
    noise_pm_covariance,
    noise_root,
    spectrum_route_residual_k,
)
from .green import asymptote_residual, green_schwarz_residual, onsager_residual, solve_green_k
from .media import MediumModel, classify, default_omega_grid, schwarz_check
from .zoo import random_passive_response

SUITES = ("schwarz", "fdt", "duality", "onsager", "asymptote", "equivalence")

DEFAULT_TOLERANCES = {
    "schwarz": 1e-12,
    "fdt": 1e-10,
    "duality_group": 1e-13,
    "duality_slots": 1e-14,
    "duality_covariance": 1e-12,
    "onsager_symmetric": 1e-12,
    "onsager_violation": 1e-3,
    "asymptote": 1e-3,
    "equivalence": 1e-12,
}

SEED = 20100501


def worker_count() -> int:
    env = os.environ.get("MQED_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"MQED_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise ValueError("MQED_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def parallel_map(func: Callable, items: Iterable, workers: Optional[int] = None) -> list:
    """Order-preserving map over a thread pool."""
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


@dataclass
class CheckRecord:
    check: str
    parameters: dict
    residual: float
    tolerance: float
    passed: bool
    comparison: str = "<="
    info: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "parameters": self.parameters,
            "residual": self.residual,
            "comparison": self.comparison,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.info:
            out["info"] = self.info
        return out


@dataclass
class VerificationReport:
    suite: str
    model: str
    units: str
    records: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def to_dict(self, include_timings: bool = False) -> dict:
        out = {
            "schema_version": 1,
            "suite": self.suite,
            "model": self.model,
            "units": self.units,
            "pass": self.passed,
            "records": [r.to_dict() for r in self.records],
        }
        if include_timings:
            out["timings"] = self.timings
        return out


def _upper(check, values, params, tol, info=None) -> CheckRecord:
    """Record the worst of ``values`` against an upper bound."""
    values = np.asarray(values, dtype=float)
    i = int(np.argmax(values))
    worst = float(values[i])
    return CheckRecord(check, params[i], worst, tol, bool(worst <= tol), "<=", info)


def _vec(v) -> list:
    return [float(x) for x in v]


def default_k_vectors(model: MediumModel, const: PhysicalConstants) -> list:
    mag = 0.7 * model.reference_frequency() / const.c
    dirs = [np.eye(3)[i] for i in range(3)] + [np.array([1.0, 2.0, 3.0]) / math.sqrt(14.0)]
    return [mag * d for d in dirs]


def _tol(overrides, key):
    return overrides.get(key, DEFAULT_TOLERANCES[key])


# --------------------------------------------------------------------------


def suite_schwarz(model, const, tol, workers):
    t = _tol(tol, "schwarz")
    w0 = model.reference_frequency()
    grid = default_omega_grid(model, count=100)
    cgrid = grid + 0.1j * w0
    records = [
        _upper("response_reflection_real", [schwarz_check(model, grid)], [{"grid": "100 real"}], t),
        _upper(
            "response_reflection_complex",
            [schwarz_check(model, cgrid)],
            [{"grid": "100 complex, Im = 0.1 w0"}],
            t,
        ),
    ]
    for k in default_k_vectors(model, const):
        pts = list(grid)
        q = parallel_map(lambda w: conductivity_schwarz_residual(model, k, w, const), pts, workers)
        g = parallel_map(lambda w: green_schwarz_residual(model, k, w, const), pts, workers)
        params = [{"k": _vec(k), "omega": float(w)} for w in pts]
        records.append(_upper("conductivity_reflection", q, params, t))
        records.append(_upper("green_reflection", g, params, t))
    return records


def fdt_grid(model: MediumModel, const: PhysicalConstants, n: int = 20):
    w0 = model.reference_frequency()
    omegas = np.geomspace(0.1 * w0, 10 * w0, n)
    # quarter log step keeps n = k c / w off 1 (the vacuum light cone)
    indices = np.geomspace(0.1, 10.0, n) * 10 ** (0.5 / (n - 1))
    direction = np.array([1.0, 2.0, 3.0]) / math.sqrt(14.0)
    return [(idx * w / const.c * direction, float(w)) for idx in indices for w in omegas]


def suite_fdt(model, const, tol, workers):
    t = _tol(tol, "fdt")
    pts = fdt_grid(model, const)
    params = [{"k": _vec(k), "omega": w} for k, w in pts]
    rel = parallel_map(lambda p: integral_relation_residual_k(model, p[0], p[1], const), pts, workers)
    route = parallel_map(lambda p: spectrum_route_residual_k(model, p[0], p[1], const), pts, workers)

    def min_eig(p):
        green = solve_green_k(model, p[0], p[1], const)
        try:
            s = field_fluctuation_spectrum(green, const=const)
        except ConsistencyError:
            return math.inf
        scale = const.hbar * const.mu0 * p[1] ** 2 / math.pi * float(np.linalg.norm(green.G))
        return -s.min_eigenvalue / scale

    neg = parallel_map(min_eig, pts, workers)
    return [
        _upper("integral_relation", rel, params, t),
        _upper("spectrum_routes", route, params, t),
        _upper("spectrum_psd", neg, params, 1e-10, {"measure": "-min_eig(S)/(hbar mu0 w^2 ||G|| / pi)"}),
    ]


def suite_duality(model, const, tol, workers):
    rng = np.random.default_rng(SEED)
    tg = _tol(tol, "duality_group")
    ts = _tol(tol, "duality_slots")
    tc = _tol(tol, "duality_covariance")
    records = []

    thetas = rng.uniform(-2 * math.pi, 2 * math.pi, size=(100, 2))
    group = [
        np.linalg.norm(dual.response_transform(a) @ dual.response_transform(b) - dual.response_transform(a + b))
        for a, b in thetas
    ]
    records.append(_upper("group_composition", group, [{"theta1": float(a), "theta2": float(b)} for a, b in thetas], tg))
    inverse = [np.linalg.norm(dual.response_transform(a) @ dual.response_transform(-a) - np.eye(4)) for a, _ in thetas]
    records.append(_upper("group_inverse", inverse, [{"theta": float(a)} for a, _ in thetas], tg))
    comm = [np.linalg.norm(dual.rotation_matrix(a) @ dual.SYMPLECTIC - dual.SYMPLECTIC @ dual.rotation_matrix(a)) for a, _ in thetas]
    records.append(_upper("symplectic_commutes", comm, [{"theta": float(a)} for a, _ in thetas], tg))

    grid = default_omega_grid(model)
    samples = [model.evaluate(w) for w in grid]
    params = [{"omega": float(w)} for w in grid]
    slot = []
    for rs in samples:
        rot = dual.rotate_responses(rs, math.pi / 2).stack()
        expected = np.stack([rs.mu, -rs.zeta, -rs.xi, rs.eps])
        slot.append(float(np.max(np.abs(rot - expected))))
    records.append(_upper("slot_permutation_half_pi", slot, params, ts))

    cov_thetas = (math.pi / 7, math.pi / 4, math.pi / 2, 2.5)
    cov, cov_params, noise_cov = [], [], []
    for rs, w in zip(samples, grid):
        fields = dual.FieldPair(*(rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))))
        noise = dual.FieldPair(*(rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))))
        flux = dual.constitutive_flux(rs, fields, noise, const.c)
        for th in cov_thetas:
            try:
                rs2 = dual.rotate_responses(rs, th)
                res = dual.constitutive_residual(
                    rs2,
                    dual.rotate_fields(fields, th),
                    dual.rotate_noise(rs, noise, th),
                    dual.rotate_fields(flux, th),
                    const.c,
                )
                C = _pm_scaled_covariance(rs, const)
                C2 = _pm_scaled_covariance(rs2, const)
                nc = float(np.linalg.norm(dual.rotate_noise_covariance(rs, C, th) - C2) / max(np.linalg.norm(C2), 1e-300))
            except (DualitySingularityError, np.linalg.LinAlgError):
                # a degenerate rotated medium fails this point
                res, nc = math.inf, math.inf
            cov.append(res)
            noise_cov.append(nc)
            cov_params.append({"omega": float(w), "theta": th})
    records.append(_upper("constitutive_covariance", cov, cov_params, tc))
    records.append(_upper("noise_covariance_covariance", noise_cov, cov_params, 1e-10))

    sym = dual.symmetry_class(model, grid[:: max(1, len(grid) // 10)])
    records.append(CheckRecord("symmetry_class", {"omega_samples": 10}, 0.0, 0.0, True, "info", sym.to_dict()))
    return records


def _pm_scaled_covariance(rs, const):
    """Covariance of ``(Z0 P_N, mu0 M_N)`` from that of ``(P_N, M_N)``."""
    scale = np.diag([const.Z0] * 3 + [const.mu0] * 3)
    return scale @ noise_pm_covariance(rs, rs.omega.real, const) @ scale


def onsager_witness(model: MediumModel, const: PhysicalConstants):
    w0 = model.reference_frequency()
    return np.array([0.3, 0.5, 0.7]) * w0 / const.c, 0.8 * w0


def suite_onsager(model, const, tol, workers):
    """Reciprocal media must be Onsager-symmetric; non-reciprocal ones must violate it."""
    grid = default_omega_grid(model)
    rs0 = model.evaluate(model.reference_frequency())
    reciprocal = all(classify(model.evaluate(w)).reciprocal for w in grid)
    info = {"reciprocal": reciprocal, "class": classify(rs0).kind}
    if reciprocal:
        t = _tol(tol, "onsager_symmetric")
        records = []
        for k in default_k_vectors(model, const):
            vals = parallel_map(lambda w: onsager_residual(model, k, w, const), list(grid), workers)
            records.append(_upper("onsager_symmetric", vals, [{"k": _vec(k), "omega": float(w)} for w in grid], t, info))
        return records
    t = _tol(tol, "onsager_violation")
    k, w = onsager_witness(model, const)
    res = onsager_residual(model, k, w, const)
    info = {**info, "violation_detected": bool(res >= t)}
    return [CheckRecord("onsager_violation", {"k": _vec(k), "omega": float(w)}, res, t, bool(res >= t), ">=", info)]


def suite_asymptote(model, const, tol, workers):
    t = _tol(tol, "asymptote")
    top = model.highest_resonance()
    omegas = np.geomspace(1e3 * top, 1e4 * top, 10)
    records = []
    for k in default_k_vectors(model, const):
        vals = parallel_map(lambda w: asymptote_residual(model, k, w, const), list(omegas), workers)
        params = {"k": _vec(k), "omega_start": float(omegas[0]), "omega_stop": float(omegas[-1])}
        records.append(CheckRecord("asymptote_start", params, float(vals[0]), t, bool(vals[0] <= t)))
        steps = np.diff(vals)
        worst_step = float(np.max(steps))
        records.append(
            CheckRecord(
                "asymptote_monotone",
                params,
                worst_step,
                0.0,
                bool(worst_step < 0.0),
                "<",
                {"residuals": [float(v) for v in vals]},
            )
        )
    return records


def suite_equivalence(model, const, tol, workers):
    t = _tol(tol, "equivalence")
    grid = default_omega_grid(model)
    records = []
    for k in default_k_vectors(model, const):
        vals = parallel_map(lambda w: equivalence_residual(model.evaluate(w), k, w, const), list(grid), workers)
        records.append(_upper("equivalence_model", vals, [{"k": _vec(k), "omega": float(w)} for w in grid], t))
    rng = np.random.default_rng(SEED)
    draws = []
    for _ in range(200):
        rs = random_passive_response(rng, const=const)
        draws.append((rs, rng.normal(size=3) * abs(rs.omega) / const.c))
    vals = parallel_map(lambda d: equivalence_residual(d[0], d[1], None, const), draws, workers)
    params = [{"draw": i, "omega": float(d[0].omega.real)} for i, d in enumerate(draws)]
    records.append(_upper("equivalence_random_passive", vals, params, t))
    # the noise root exists for every passive draw
    recon = []
    for rs, _ in draws:
        C = noise_pm_covariance(rs, None, const)
        R = noise_root(rs, None, const)
        recon.append(float(np.linalg.norm(R @ R.conj().T - C) / np.linalg.norm(C)))
    records.append(_upper("noise_root_reconstruction", recon, params, 1e-10))
    return records


_RUNNERS = {
    "schwarz": suite_schwarz,
    "fdt": suite_fdt,
    "duality": suite_duality,
    "onsager": suite_onsager,
    "asymptote": suite_asymptote,
    "equivalence": suite_equivalence,
}


def run_suite(
    suite: str,
    model: MediumModel,
    const: PhysicalConstants = SCALED,
    tolerances: Optional[dict] = None,
    workers: Optional[int] = None,
) -> VerificationReport:
    if suite not in _RUNNERS:
        raise KeyError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    start = time.perf_counter()
    records = _RUNNERS[suite](model, const, dict(tolerances or {}), workers)
    report = VerificationReport(suite, model.name, const.name, records)
    report.timings = {"wall_seconds": time.perf_counter() - start}
    return report
