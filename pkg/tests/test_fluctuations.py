import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mqed.conductivity import Nonlocal1DKernel
from mqed.constants import SCALED, SI
from mqed.errors import ConsistencyError, InvalidInputError, NonPassiveMediumError
from mqed.fluctuations import (
    current_covariance_from_noise,
    current_covariance_k,
    field_fluctuation_spectrum,
    field_spectrum_via_dissipation_k,
    integral_relation_residual_1d,
    integral_relation_residual_k,
    noise_pm_covariance,
    noise_root,
    spectrum_route_residual_1d,
    spectrum_route_residual_k,
)
from mqed.green import solve_green_1d, solve_green_k
from mqed.media import ResponseSet, default_omega_grid
from mqed.tensors import hermiticity_defect
from mqed.zoo import FIXTURE_NAMES, load_fixture, random_passive_response

I3 = np.eye(3)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_noise_reproduces_current_kernel(seed):
    # j_N = -i w P_N + curl M_N must carry exactly the current kernel of Q
    rng = np.random.default_rng(seed)
    rs = random_passive_response(rng)
    k = rng.normal(size=3)
    direct = current_covariance_k(rs, k, rs.omega)
    via_noise = current_covariance_from_noise(rs, k)
    assert np.linalg.norm(via_noise - direct) <= 1e-12 * np.linalg.norm(direct)


def test_noise_reproduces_current_kernel_si():
    rng = np.random.default_rng(2)
    rs = random_passive_response(rng, omega=1e15, const=SI)
    k = 5e6 * rng.normal(size=3)
    direct = current_covariance_k(rs, k, rs.omega, SI)
    via_noise = current_covariance_from_noise(rs, k, const=SI)
    assert np.linalg.norm(via_noise - direct) <= 1e-12 * np.linalg.norm(direct)


def test_block_diagonal_without_magnetoelectric_coupling():
    rs = ResponseSet(np.diag([2 + 0.3j, 3 + 0.1j, 1.5 + 0.2j]), 0, 0, (1.2 + 0.05j) * I3, 0.9)
    C = noise_pm_covariance(rs)
    assert np.all(C[:3, 3:] == 0) and np.all(C[3:, :3] == 0)


def test_isotropic_blocks_by_hand():
    eps, mu, w = 2 + 0.4j, 1.5 + 0.1j, 0.7
    C = noise_pm_covariance(ResponseSet(eps * I3, 0, 0, mu * I3, w))
    assert np.allclose(np.diag(C)[:3], eps.imag)
    assert np.allclose(np.diag(C)[3:], -(1 / mu).imag)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_covariance_hermitian_psd_and_root(name):
    model = load_fixture(name)
    for w in default_omega_grid(model):
        rs = model.evaluate(w)
        C = noise_pm_covariance(rs)
        assert hermiticity_defect(C) <= 1e-13
        norm = np.linalg.norm(C)
        assert np.linalg.eigvalsh(C)[0] >= -1e-10 * norm
        if norm > 0:
            R = noise_root(rs)
            assert np.linalg.norm(R @ R.conj().T - C) <= 1e-10 * norm


def test_gain_medium_rejected():
    rs = ResponseSet((2 - 0.5j) * I3, 0, 0, I3, 1.0)
    with pytest.raises(NonPassiveMediumError) as info:
        noise_root(rs)
    assert info.value.min_eigenvalue < 0


def test_strong_lossy_tellegen_coupling_is_not_passive():
    # a magnetoelectric loss term far above the eps and mu losses
    rs = ResponseSet((2 + 0.01j) * I3, 0.2j * I3, 0.2j * I3, (1 + 0.01j) * I3, 1.0)
    with pytest.raises(NonPassiveMediumError):
        noise_root(rs)


def test_lossless_tellegen_coupling_keeps_covariance_psd():
    rs = ResponseSet((2 + 0.01j) * I3, 1.5 * I3, 1.5 * I3, (1 + 0.01j) * I3, 1.0)
    R = noise_root(rs)
    C = noise_pm_covariance(rs)
    assert np.linalg.norm(R @ R.conj().T - C) <= 1e-10 * np.linalg.norm(C)


def test_covariance_needs_real_positive_frequency():
    with pytest.raises(InvalidInputError):
        noise_pm_covariance(ResponseSet.vacuum(1.0 + 0.1j))


# -- integral relation --------------------------------------------------------


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_integral_relation_fixtures(name):
    model = load_fixture(name)
    for w in default_omega_grid(model, 10):
        for n in (0.3, 1.7, 4.0):
            k = n * w * np.array([1.0, 2.0, 3.0]) / math.sqrt(14)
            assert integral_relation_residual_k(model, k, w) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_integral_relation_random_passive(seed):
    rng = np.random.default_rng(seed)
    rs = random_passive_response(rng)
    assert integral_relation_residual_k(rs, rng.normal(size=3), rs.omega) <= 1e-10


@pytest.mark.parametrize("n", [32, 64, 128])
@pytest.mark.parametrize("w", [0.5, 1.0, 2.0])
def test_integral_relation_1d(n, w):
    assert integral_relation_residual_1d(Nonlocal1DKernel(n=n), w) <= 1e-11


def test_integral_relation_1d_other_units():
    kern = Nonlocal1DKernel(n=32, length=1e-6, ell=1e-7, plasma_frequency=1e15, damping=1e13, const=SI)
    assert integral_relation_residual_1d(kern, 3e14) <= 1e-11


# -- spectra ------------------------------------------------------------------


def test_spectrum_zero_without_medium_1d():
    spec = field_fluctuation_spectrum(solve_green_1d(Nonlocal1DKernel(n=32, plasma_frequency=0.0), 0.9))
    assert np.all(spec.S == 0)


def test_vacuum_spectrum_off_shell_vanishes():
    spec = field_fluctuation_spectrum(solve_green_k(ResponseSet.vacuum(0.5), [1.0, 0.0, 0.0]))
    assert np.max(np.abs(spec.S)) <= 1e-15


def test_spectrum_scale_by_hand():
    eps, w, k = 2.0 + 0.5j, 0.8, np.array([0.0, 0.0, 1.1])
    spec = field_fluctuation_spectrum(solve_green_k(ResponseSet(eps * I3, 0, 0, I3, w), k))
    gt = 1 / (k @ k - eps * w**2)
    assert spec.S[0, 0] == pytest.approx(w**2 * gt.imag / math.pi, rel=1e-13)
    assert spec.min_eigenvalue >= 0


def test_spectrum_rejects_active_green_matrix():
    with pytest.raises(ConsistencyError):
        field_fluctuation_spectrum(np.diag([1.0 - 1.0j, 1.0, 1.0]), omega=1.0)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_spectrum_routes_agree(name):
    model = load_fixture(name)
    for w in default_omega_grid(model, 10):
        k = 1.3 * w * np.array([0.0, 0.6, 0.8])
        assert spectrum_route_residual_k(model, k, w) <= 1e-10
        spec = field_fluctuation_spectrum(solve_green_k(model, k, w))
        assert hermiticity_defect(spec.S) <= 1e-13
        via = field_spectrum_via_dissipation_k(model, k, w)
        assert np.linalg.eigvalsh(via)[0] >= -1e-10 * max(np.linalg.norm(via), 1e-300)


@pytest.mark.parametrize("w", [0.5, 1.0, 2.0])
def test_spectrum_routes_agree_1d(w):
    assert spectrum_route_residual_1d(Nonlocal1DKernel(n=64), w) <= 1e-10


def test_scaled_constants_are_unity():
    assert SCALED.mu0 == 1.0 and SCALED.Z0 == 1.0
