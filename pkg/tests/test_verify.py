"""Seeded randomized verification of the extremality statements."""

import numpy as np
import pytest

from thermocap.errors import DomainError
from thermocap.verify import (
    ProbeEnsemble,
    random_energy_constrained_cm,
    random_symplectic,
    scan_delta_ci,
    verify_directional,
    verify_local_max,
    verify_trace_bound,
)


def test_ensemble_validation():
    with pytest.raises(DomainError):
        ProbeEnsemble(1, 0.2)
    with pytest.raises(DomainError):
        ProbeEnsemble(1, 1.5, kind="bogus")
    with pytest.raises(DomainError):
        ProbeEnsemble(1, 1.5, kind="correlated-two-mode")


def test_random_symplectic_preserves_form():
    rng = np.random.default_rng(3)
    J = np.kron(np.eye(2), np.array([[0.0, -1.0], [1.0, 0.0]]))
    for correlated in (False, True):
        s = random_symplectic(2, rng, correlated=correlated)
        assert np.allclose(s @ J @ s.T, J, atol=1e-10)


def test_probe_generator_is_deterministic():
    ens = ProbeEnsemble(2, 1.5, seed=7)
    a = random_energy_constrained_cm(ens, 11)
    b = random_energy_constrained_cm(ens, 11)
    assert np.array_equal(a.gamma, b.gamma)
    c = random_energy_constrained_cm(ProbeEnsemble(2, 1.5, seed=8), 11)
    assert not np.allclose(a.gamma, c.gamma)


def test_probe_generator_vacuum_energy_edge():
    cm = random_energy_constrained_cm(ProbeEnsemble(1, 0.5), 0)
    assert np.allclose(cm.gamma, np.eye(2))


def test_trace_bound_two_modes():
    report = verify_trace_bound(ProbeEnsemble(2, 1.5, count=1000, seed=7))
    assert report["passed"]
    assert report["violations"] == []
    assert report["max_T"] <= report["bound"] + 1e-9
    grid = report["diagonal_grid"]
    assert grid["violations"] == 0
    assert grid["argmax_split"] == pytest.approx(0.5, abs=1e-9)


def test_trace_bound_correlated_generator():
    report = verify_trace_bound(
        ProbeEnsemble(2, 1.5, count=300, seed=7, kind="correlated-two-mode")
    )
    assert report["passed"]


def test_directional_single_and_two_modes():
    for n in (1, 2):
        report = verify_directional(ProbeEnsemble(n, 1.5, count=1000, seed=7), 0.1)
        assert report["passed"]
        assert report["max_derivative"] <= 1e-12


def test_local_max_above_crossing():
    report = verify_local_max(2.0, 0.1, ProbeEnsemble(1, 2.5, count=200, seed=7))
    assert report["regime"] == "above-crossing"
    assert report["passed"]
    assert report["positives"] == []


def test_local_max_below_crossing_classified():
    # below the perturbative crossing positive CI differences are expected
    report = verify_local_max(0.005, 0.1, ProbeEnsemble(1, 0.505, count=100, seed=7))
    assert report["regime"] == "below-crossing"
    assert report["passed"]


def test_scan_delta_ci_single_crossing():
    grid = [0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1, 5, 10]
    for case in ("single-mode", "two-mode"):
        report = scan_delta_ci(0.1, grid, case)
        assert report["sign_changes"] == 1
        assert report["single_crossing"]
        assert report["rows"][0]["delta_ci"] > 0
        assert report["rows"][-1]["delta_ci"] < 0
        # the reported root sits inside the grid's sign-change bracket
        below = max(r["n_s"] for r in report["rows"] if r["delta_ci"] > 0)
        above = min(r["n_s"] for r in report["rows"] if r["delta_ci"] < 0)
        assert below < report["N_s0"] < above
