"""Acceptance criteria, one test per criterion.

Each test records its verdict and worst residual; the terminal summary prints
one PASS/FAIL line per criterion.
"""

import math
import shutil
import subprocess
import sys

import numpy as np
import pytest

from mqed import duality as dual
from mqed.conductivity import Nonlocal1DKernel, conductivity_schwarz_residual, equivalence_residual
from mqed.constants import SCALED
from mqed.errors import DualitySingularityError
from mqed.fluctuations import (
    field_fluctuation_spectrum,
    integral_relation_residual_1d,
    integral_relation_residual_k,
    noise_pm_covariance,
    noise_root,
    spectrum_route_residual_k,
)
from mqed.green import (
    asymptote_residual,
    green_blocks_k,
    green_schwarz_residual,
    onsager_residual,
    solve_green_k,
)
from mqed.media import ResponseSet, classify, default_omega_grid, schwarz_check
from mqed.tensors import hermiticity_defect
from mqed.verify import default_k_vectors, fdt_grid, onsager_witness
from mqed.zoo import FIXTURE_NAMES, PASSIVE_FIXTURES, load_fixture, random_passive_response, random_response

from conftest import ACCEPTANCE_RESULTS, random_complex

I3 = np.eye(3)


def record(label, passed, detail):
    ACCEPTANCE_RESULTS[label] = (bool(passed), detail)
    print(f"criterion {label}: {'PASS' if passed else 'FAIL'}  {detail}")


def test_criterion_01_equivalence():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(200):
        rs = random_passive_response(rng)
        k = rng.normal(size=3) * rng.uniform(0.1, 5.0)
        worst = max(worst, equivalence_residual(rs, k))
    ok = worst <= 1e-12
    record("1", ok, f"equivalence, 200 passive draws: max rel residual {worst:.2e} (tol 1e-12)")
    assert ok


def test_criterion_02_generalised_fdt_k_space():
    names = ("lorentz_dielectric", "lorentz_magnetic", "chiral", "tellegen")
    worst = {}
    for name in names:
        model = load_fixture(name)
        worst[name] = max(integral_relation_residual_k(model, k, w) for k, w in fdt_grid(model, SCALED))
    ok = all(v <= 1e-10 for v in worst.values())
    detail = ", ".join(f"{n} {v:.1e}" for n, v in worst.items())
    record("2", ok, f"integral relation on 20x20 grid: {detail} (tol 1e-10)")
    assert ok


def test_criterion_03_discrete_fdt_1d():
    worst = 0.0
    for n in (32, 64, 128):
        kern = Nonlocal1DKernel(n=n, length=10.0, ell=1.0, plasma_frequency=1.0, damping=0.1)
        for w in (0.5, 1.0, 2.0):
            worst = max(worst, integral_relation_residual_1d(kern, w))
    ok = worst <= 1e-11
    record("3", ok, f"1-D Gaussian-Drude integral relation: max rel residual {worst:.2e} (tol 1e-11)")
    assert ok


def test_criterion_04_schwarz_reflection():
    worst = {"response": 0.0, "conductivity": 0.0, "green": 0.0}
    for name in FIXTURE_NAMES:
        model = load_fixture(name)
        grid = default_omega_grid(model, 100)
        worst["response"] = max(worst["response"], schwarz_check(model, grid))
        for k in default_k_vectors(model, SCALED):
            for w in grid:
                worst["conductivity"] = max(worst["conductivity"], conductivity_schwarz_residual(model, k, w))
                worst["green"] = max(worst["green"], green_schwarz_residual(model, k, w))
    ok = all(v <= 1e-12 for v in worst.values())
    detail = ", ".join(f"{n} {v:.1e}" for n, v in worst.items())
    record("4", ok, f"reflection over 100-point grid, all fixtures: {detail} (tol 1e-12)")
    assert ok


def test_criterion_05_onsager_dichotomy():
    reciprocal = [n for n in FIXTURE_NAMES if classify(load_fixture(n).evaluate(1.0)).reciprocal]
    worst_sym = 0.0
    for name in reciprocal:
        model = load_fixture(name)
        for k in default_k_vectors(model, SCALED):
            for w in default_omega_grid(model, 50):
                worst_sym = max(worst_sym, onsager_residual(model, k, w))
    tellegen = load_fixture("tellegen")
    assert tellegen.chi[0].amplitude == 0.3
    k, w = onsager_witness(tellegen, SCALED)
    violation = onsager_residual(tellegen, k, w)
    ok = worst_sym <= 1e-12 and violation >= 1e-3
    record(
        "5",
        ok,
        f"reciprocal fixtures max {worst_sym:.2e} (tol 1e-12); isotropic Tellegen chi0=0.3 at "
        f"k={k.tolist()}, w={w}: {violation:.2e} (need >= 1e-3)",
    )
    assert ok


def test_criterion_05_supplement_anisotropic_tellegen():
    model = load_fixture("tellegen_uniaxial")
    k, w = onsager_witness(model, SCALED)
    violation = onsager_residual(model, k, w)
    ok = violation >= 1e-3
    record("5s", ok, f"supplementary: uniaxial Tellegen chi0=0.3 at the same witness: {violation:.2e} (need >= 1e-3)")
    assert ok


def test_criterion_06_duality_group_and_slots():
    rng = np.random.default_rng(106)
    T = dual.response_transform
    worst_group = 0.0
    for a, b in rng.uniform(-2 * math.pi, 2 * math.pi, size=(100, 2)):
        worst_group = max(
            worst_group,
            np.max(np.abs(T(a) @ T(b) - T(a + b))),
            np.max(np.abs(T(a) @ T(-a) - np.eye(4))),
        )
    worst_group = max(worst_group, np.max(np.abs(T(0.0) - np.eye(4))))
    worst_slot = 0.0
    samples = [random_response(rng) for _ in range(50)]
    samples += [load_fixture(n).evaluate(0.8) for n in FIXTURE_NAMES]
    for rs in samples:
        rot = dual.rotate_responses(rs, math.pi / 2).stack()
        worst_slot = max(worst_slot, np.max(np.abs(rot - np.stack([rs.mu, -rs.zeta, -rs.xi, rs.eps]))))
    ok = worst_group <= 1e-13 and worst_slot <= 1e-14
    record("6", ok, f"group laws max {worst_group:.2e} (tol 1e-13); pi/2 slot map max {worst_slot:.2e} (tol 1e-14)")
    assert ok


def test_criterion_07_symmetry_classification():
    expected = {
        "chiral": ("continuous", None),
        "tellegen": ("continuous", None),
        "lorentz_dielectric": ("discrete", math.pi / 4),
        "uniaxial_dielectric": ("discrete", math.pi / 4),
        "reciprocal_bianisotropic": ("discrete", math.pi / 4),
        "vacuum": ("continuous", None),
    }
    found = {}
    for name in expected:
        model = load_fixture(name)
        res = dual.symmetry_class(model, default_omega_grid(model, 10))
        found[name] = (res.symmetry, res.witness_theta)
    vac = ResponseSet.vacuum()
    fixed = np.max(np.abs(dual.rotate_responses(vac, 1.234).stack() - vac.stack()))
    ok = fixed <= 1e-13 and all(
        found[n][0] == s and (t is None) == (found[n][1] is None) and (t is None or abs(found[n][1] - t) < 1e-15)
        for n, (s, t) in expected.items()
    )
    detail = ", ".join(f"{n} {s}" for n, (s, _) in found.items())
    record("7", ok, f"{detail}; vacuum at 1.234 moved by {fixed:.1e}")
    assert ok


def test_criterion_08_constitutive_covariance():
    rng = np.random.default_rng(108)
    worst, count = 0.0, 0
    for _ in range(100):
        rs = random_response(rng)
        fields = dual.FieldPair(*random_complex(rng, (2, 3)))
        noise = dual.FieldPair(*random_complex(rng, (2, 3)))
        flux = dual.constitutive_flux(rs, fields, noise)
        for theta in (math.pi / 7, math.pi / 4, math.pi / 2, 2.5):
            try:
                rs2 = dual.rotate_responses(rs, theta)
            except DualitySingularityError:
                continue
            res = dual.constitutive_residual(
                rs2,
                dual.rotate_fields(fields, theta),
                dual.rotate_noise(rs, noise, theta),
                dual.rotate_fields(flux, theta),
            )
            worst, count = max(worst, res), count + 1
    ok = worst <= 1e-12 and count >= 390
    record("8", ok, f"joint rotation over {count} (draw, theta) pairs: max rel residual {worst:.2e} (tol 1e-12)")
    assert ok


def test_criterion_09_vacuum_green_blocks():
    rng = np.random.default_rng(109)
    worst_id, worst_rot, points = 0.0, 0.0, 0
    while points < 50:
        k, w = rng.normal(size=3), rng.uniform(0.2, 3.0)
        if abs(np.linalg.norm(k) - w) < 1e-2:
            continue
        points += 1
        b = green_blocks_k(solve_green_k(ResponseSet.vacuum(w), k))
        scale = np.linalg.norm(b.Gee)
        worst_id = max(worst_id, np.linalg.norm(b.Gee - b.Gmm - I3) / scale, np.linalg.norm(b.Gem + b.Gme) / scale)
        for theta in rng.uniform(-10, 10, size=4):
            rot = dual.rotate_green_blocks_vacuum(b, theta)
            worst_rot = max(worst_rot, np.linalg.norm(rot.stack() - b.stack()) / np.linalg.norm(b.stack()))
    ok = worst_id <= 1e-12 and worst_rot <= 1e-12
    record("9", ok, f"50 off-shell points: identities {worst_id:.2e}, rotation invariance {worst_rot:.2e} (tol 1e-12)")
    assert ok


def test_criterion_10_noise_covariance():
    worst_herm, worst_psd, worst_root, offdiag = 0.0, 0.0, 0.0, 0.0
    for name in PASSIVE_FIXTURES:
        model = load_fixture(name)
        for w in default_omega_grid(model):
            rs = model.evaluate(w)
            C = noise_pm_covariance(rs)
            norm = np.linalg.norm(C)
            worst_herm = max(worst_herm, hermiticity_defect(C))
            if norm == 0:
                continue
            worst_psd = max(worst_psd, -np.linalg.eigvalsh(C)[0] / norm)
            R = noise_root(rs)
            worst_root = max(worst_root, np.linalg.norm(R @ R.conj().T - C) / norm)
            if not np.any(rs.xi) and not np.any(rs.zeta):
                offdiag = max(offdiag, np.max(np.abs(C[:3, 3:])), np.max(np.abs(C[3:, :3])))
    ok = worst_herm <= 1e-13 and worst_psd <= 1e-10 and worst_root <= 1e-10 and offdiag == 0.0
    record(
        "10",
        ok,
        f"hermiticity {worst_herm:.1e}, -min eig/|C| {worst_psd:.1e}, root {worst_root:.1e}, "
        f"mixed blocks without coupling {offdiag:.1e}",
    )
    assert ok


def test_criterion_11_asymptote():
    worst_start, monotone = 0.0, True
    for name in FIXTURE_NAMES:
        model = load_fixture(name)
        top = model.highest_resonance()
        omegas = np.geomspace(1e3 * top, 1e4 * top, 10)
        for k in default_k_vectors(model, SCALED):
            vals = [asymptote_residual(model, k, w) for w in omegas]
            worst_start = max(worst_start, vals[0])
            monotone = monotone and bool(np.all(np.diff(vals) < 0))
    ok = worst_start <= 1e-3 and monotone
    record("11", ok, f"at 1e3 x highest resonance max {worst_start:.2e} (tol 1e-3); decreasing over a decade: {monotone}")
    assert ok


def test_criterion_12_spectrum_consistency():
    worst_route, worst_neg = 0.0, 0.0
    for name in FIXTURE_NAMES:
        model = load_fixture(name)
        for k, w in fdt_grid(model, SCALED):
            worst_route = max(worst_route, spectrum_route_residual_k(model, k, w))
            green = solve_green_k(model, k, w)
            spec = field_fluctuation_spectrum(green)
            scale = w**2 / math.pi * np.linalg.norm(green.G)
            worst_neg = max(worst_neg, -spec.min_eigenvalue / scale, hermiticity_defect(spec.S) if np.any(spec.S) else 0.0)
    ok = worst_route <= 1e-10 and worst_neg <= 1e-10
    record("12", ok, f"two routes max {worst_route:.2e} (tol 1e-10); PSD/Hermitian defect {worst_neg:.1e}")
    assert ok


def test_criterion_13_cli_determinism(tmp_path):
    exe = shutil.which("mqed")
    cmd = [exe] if exe else [sys.executable, "-m", "mqed.cli"]
    outputs, codes = [], []
    for i in range(2):
        out = tmp_path / f"report{i}.json"
        proc = subprocess.run(
            cmd + ["verify", "--model", "lorentz_dielectric", "--suite", "fdt", "--out", str(out)],
            capture_output=True,
        )
        codes.append(proc.returncode)
        outputs.append(out.read_bytes())
    ok = codes == [0, 0] and outputs[0] == outputs[1]
    record("13", ok, f"exit codes {codes}, reports byte-identical: {outputs[0] == outputs[1]}")
    assert ok
