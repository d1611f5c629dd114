"""Thermal-channel analytics: CI, MI, squeeze frame, extremal derivative."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thermocap import (
    ConstraintError,
    CovMatrix,
    DomainError,
    GaussianChannel,
    InvalidStateError,
    ThermalChannel,
    apply_channel,
    asymptotic_capacity,
    coherent_information,
    directional_derivative,
    exchange_entropy,
    g_entropy,
    joint_after_channel,
    mutual_information,
    squeeze_diagonalization,
    symplectic_eigenvalues,
    thermal_cm,
)
from thermocap.verify import ProbeEnsemble, random_energy_constrained_cm


def test_thermal_channel_adds_noise():
    out = apply_channel(thermal_cm(1.0, 1), ThermalChannel(0.25))
    assert np.allclose(out.gamma, 3.5 * np.eye(2))


def test_thermal_channel_rejects_negative_noise():
    with pytest.raises(DomainError):
        ThermalChannel(-0.1)


def test_gaussian_channel_cp_check():
    # attenuator M = sqrt(eta) I needs Nmat >= (1 - eta) I
    eta = 0.5
    M = math.sqrt(eta) * np.eye(2)
    GaussianChannel(1, M, (1.0 - eta) * np.eye(2))
    with pytest.raises(InvalidStateError):
        GaussianChannel(1, M, 0.1 * (1.0 - eta) * np.eye(2))


def test_thermal_channel_as_gaussian_channel():
    N = 0.2
    gauss = GaussianChannel(1, np.eye(2), 2.0 * N * np.eye(2))
    cm = thermal_cm(0.7, 1)
    assert np.allclose(
        apply_channel(cm, gauss).gamma, apply_channel(cm, ThermalChannel(N)).gamma
    )
    a = joint_after_channel(cm, gauss).gamma_psi
    b = joint_after_channel(cm, ThermalChannel(N)).gamma_psi
    assert np.allclose(a, b)


def test_coherent_information_thermal_closed_form():
    # S(out) = g(N_s + N); S(joint) from the squeeze-frame eigenvalues
    n_s, N = 1.0, 0.1
    sq = squeeze_diagonalization(n_s, N)
    expected = (
        g_entropy(n_s + N)
        - g_entropy((sq.nu_A - 1.0) / 2.0)
        - g_entropy((sq.nu_B - 1.0) / 2.0)
    )
    assert coherent_information(thermal_cm(n_s, 1), ThermalChannel(N)) == pytest.approx(
        expected, abs=1e-12
    )


def test_coherent_information_frozen_value():
    assert coherent_information(thermal_cm(1.0, 1), ThermalChannel(0.1)) == pytest.approx(
        0.9296476613, abs=1e-9
    )


def test_mutual_information_dominates_ci():
    for n_s in (0.1, 1.0, 10.0):
        cm = thermal_cm(n_s, 1)
        ch = ThermalChannel(0.1)
        assert mutual_information(cm, ch) >= coherent_information(cm, ch)


def test_noiseless_channel_ci_equals_input_entropy():
    cm = thermal_cm(2.0, 1)
    assert coherent_information(cm, ThermalChannel(0.0)) == pytest.approx(
        g_entropy(2.0), abs=1e-9
    )


def test_exchange_entropy_joint_eigenvalues():
    n_s, N = 1.0, 0.1
    sq = squeeze_diagonalization(n_s, N)
    joint = joint_after_channel(thermal_cm(n_s, 1), ThermalChannel(N))
    assert sorted(symplectic_eigenvalues(joint)) == pytest.approx(
        sorted([sq.nu_A, sq.nu_B]), abs=1e-9
    )
    expected = g_entropy((sq.nu_A - 1.0) / 2.0) + g_entropy((sq.nu_B - 1.0) / 2.0)
    assert exchange_entropy(thermal_cm(n_s, 1), ThermalChannel(N)) == pytest.approx(expected)


def test_squeeze_diagonalization_invariants():
    n_s, N = 1.5, 0.2
    sq = squeeze_diagonalization(n_s, N)
    a = 2.0 * n_s + 2.0 * N + 1.0
    b = 2.0 * n_s + 1.0
    c = 2.0 * math.sqrt(n_s * (n_s + 1.0))
    # determinant and trace of the joint CM are symplectic invariants
    assert sq.nu_A * sq.nu_B == pytest.approx(a * b - c * c)
    assert sq.nu_A**2 + sq.nu_B**2 == pytest.approx(a * a + b * b - 2.0 * c * c)
    assert math.tanh(2.0 * sq.r) == pytest.approx(c / (n_s + n_s + N + 1.0))
    assert sq.nu_A >= sq.nu_B >= 1.0 - 1e-12


def test_squeeze_diagonalization_degenerate_point():
    sq = squeeze_diagonalization(0.0, 0.0)
    assert sq.r == 0.0 and sq.nu_A == 1.0 and sq.nu_B == 1.0


def test_directional_derivative_zero_at_thermal():
    n_s, N = 1.0, 0.1
    val = directional_derivative(thermal_cm(n_s, 1), n_s, ThermalChannel(N))
    assert abs(val) < 1e-10


def test_directional_derivative_requires_matching_energy():
    with pytest.raises(ConstraintError):
        directional_derivative(thermal_cm(2.0, 1), 1.0, ThermalChannel(0.1))


def test_directional_derivative_requires_noise():
    with pytest.raises(DomainError):
        directional_derivative(thermal_cm(1.0, 1), 1.0, ThermalChannel(0.0))


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=0, max_value=10_000),
    st.integers(min_value=1, max_value=2),
    st.sampled_from([0.05, 0.1, 0.3]),
)
def test_directional_derivative_nonpositive(index, n, N):
    n_s = 1.0
    probe = random_energy_constrained_cm(ProbeEnsemble(n, n_s + 0.5, 1, seed=7), index)
    assert directional_derivative(probe, n_s, ThermalChannel(N)) <= 1e-12


def test_asymptotic_capacity_values():
    assert asymptotic_capacity(0.1) == pytest.approx(-math.log2(math.e * 0.1), abs=1e-12)
    assert asymptotic_capacity(0.1) == pytest.approx(1.879233, abs=1e-6)
    assert asymptotic_capacity(1.0 / math.e) == 0.0
    assert asymptotic_capacity(0.5) == 0.0
    assert asymptotic_capacity(0.0) == math.inf
    with pytest.raises(DomainError):
        asymptotic_capacity(-0.1)


def test_ci_converges_to_capacity():
    for N in (0.05, 0.1, 0.175):
        ci = coherent_information(thermal_cm(1e4, 1), ThermalChannel(N))
        assert abs(ci + math.log2(math.e * N)) < 1e-3


def test_multimode_ci_is_additive():
    n_s, N = 1.0, 0.1
    ci1 = coherent_information(thermal_cm(n_s, 1), ThermalChannel(N))
    ci2 = coherent_information(thermal_cm(n_s, 2), ThermalChannel(N))
    assert ci2 == pytest.approx(2.0 * ci1, abs=1e-9)
