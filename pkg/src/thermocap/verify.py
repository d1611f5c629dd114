"""Seeded randomized verification of the extremality statements.

Checks, over deterministic probe ensembles at fixed energy: the trace-
functional bound T(gamma) <= 2n sqrt(4 Ebar^2 - 1), the nonpositivity of
the directional derivative of the coherent information at the thermal
input, and local maximality of the thermal input under covariance-matrix
blending.  Also scans the perturbative coherent-information difference
over an input-strength grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ThermalChannel, coherent_information, directional_derivative
from .errors import DomainError, NoRootError
from .perturbation import delta_ci_single, delta_ci_two_mode, find_ns0
from .symplectic import CovMatrix, energy, thermal_cm, trace_functional


@dataclass(frozen=True)
class ProbeEnsemble:
    """Deterministic family of valid CMs with fixed per-mode energy."""

    n: int
    e_bar: float
    count: int = 1000
    seed: int = 7
    kind: str = "squeeze-rotate"
    max_squeeze: float = 2.0

    def __post_init__(self):
        if self.e_bar < 0.5:
            raise DomainError("per-mode energy below the vacuum point 1/2")
        if self.kind not in ("squeeze-rotate", "correlated-two-mode"):
            raise DomainError(f"unknown generator kind {self.kind!r}")
        if self.kind == "correlated-two-mode" and self.n < 2:
            raise DomainError("correlated generator needs at least 2 modes")


def _interleave_permutation(n: int) -> np.ndarray:
    # maps (x1, p1, ..., xn, pn) ordering to (x1..xn, p1..pn)
    perm = np.zeros((2 * n, 2 * n))
    for i in range(n):
        perm[i, 2 * i] = 1.0
        perm[n + i, 2 * i + 1] = 1.0
    return perm


def _random_rotation(n: int, rng) -> np.ndarray:
    """Symplectic orthogonal (passive) transformation from a Haar unitary."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    u, _ = np.linalg.qr(z)
    o_xxpp = np.block([[u.real, -u.imag], [u.imag, u.real]])
    perm = _interleave_permutation(n)
    return perm.T @ o_xxpp @ perm


def _local_squeeze(ds) -> np.ndarray:
    out = []
    for d in ds:
        out.extend([d, 1.0 / d])
    return np.diag(out)


def _two_mode_squeeze(t: float, n: int) -> np.ndarray:
    s = np.eye(2 * n)
    c, sh = math.cosh(t), math.sinh(t)
    s[0, 0] = s[2, 2] = c
    s[1, 1] = s[3, 3] = c
    s[0, 2] = s[2, 0] = sh
    s[1, 3] = s[3, 1] = -sh
    return s


def random_symplectic(n: int, rng, max_squeeze: float = 2.0,
                      correlated: bool = False) -> np.ndarray:
    ds = rng.uniform(1.0, max_squeeze, size=n)
    s = _random_rotation(n, rng) @ _local_squeeze(ds)
    if correlated:
        s = s @ _two_mode_squeeze(rng.uniform(0.0, math.log(max_squeeze)), n)
    return s @ _random_rotation(n, rng)


def random_energy_constrained_cm(ensemble: ProbeEnsemble, index: int) -> CovMatrix:
    """Deterministic probe CM with energy exactly n * e_bar.

    gamma = S diag(nu) S^T with the nu >= 1 scaled toward 1 so the trace
    constraint holds exactly; near the vacuum-energy boundary the generator
    degenerates to the identity CM.
    """
    n = ensemble.n
    target = 4.0 * n * ensemble.e_bar
    rng = np.random.default_rng((ensemble.seed, index))
    for _ in range(64):
        s = random_symplectic(n, rng, ensemble.max_squeeze,
                              correlated=ensemble.kind == "correlated-two-mode")
        # per-mode weights: trace contribution of each nu_i
        w = np.array([np.sum(s[:, 2 * i : 2 * i + 2] ** 2) for i in range(n)])
        base = float(np.sum(w))
        if base > target + 1e-12:
            continue  # pure squeezed state already above the energy budget
        u = rng.uniform(0.2, 1.0, size=n)
        scale = (target - base) / float(np.sum(u * w))
        nus = 1.0 + scale * u
        d = np.repeat(nus, 2)
        return CovMatrix(n, s @ np.diag(d) @ s.T)
    if abs(target - 2.0 * n) < 1e-9:
        return CovMatrix(n, np.eye(2 * n))
    raise DomainError("could not satisfy the energy constraint; energy too low for the squeeze range")


def verify_trace_bound(ensemble: ProbeEnsemble, grid_step: float = 0.01) -> dict:
    """Sampled and grid check of T(gamma) <= 2n sqrt(4 Ebar^2 - 1)."""
    bound = 2.0 * ensemble.n * math.sqrt(4.0 * ensemble.e_bar**2 - 1.0)
    violations = []
    max_t = 0.0
    for i in range(ensemble.count):
        cm = random_energy_constrained_cm(ensemble, i)
        t = trace_functional(cm)
        max_t = max(max_t, t)
        if t > bound + 1e-9:
            violations.append({"index": i, "T": t})
    # brute-force corroboration on diagonal two-mode CMs over the energy split
    grid = None
    if ensemble.e_bar > 0.5:
        ts = np.arange(0.0, 1.0 + 1e-12, grid_step)
        lo, hi = 1.0, 4.0 * ensemble.e_bar - 1.0
        a = lo + ts * (hi - lo)
        b = 4.0 * ensemble.e_bar - a
        vals = 2.0 * (np.sqrt(a**2 - 1.0) + np.sqrt(np.clip(b**2 - 1.0, 0.0, None)))
        split_bound = 4.0 * math.sqrt(4.0 * ensemble.e_bar**2 - 1.0)
        grid = {
            "max": float(vals.max()),
            "argmax_split": float(ts[int(np.argmax(vals))]),
            "bound": split_bound,
            "violations": int(np.sum(vals > split_bound + 1e-9)),
        }
    return {
        "kind": "trace-bound",
        "count": ensemble.count,
        "bound": bound,
        "max_T": max_t,
        "violations": violations,
        "diagonal_grid": grid,
        "passed": not violations and (grid is None or grid["violations"] == 0),
    }


def verify_directional(ensemble: ProbeEnsemble, N: float) -> dict:
    """Directional derivative at the thermal input must be <= 1e-12 for every probe."""
    n_s = ensemble.e_bar - 0.5
    ch = ThermalChannel(N)
    violations = []
    max_d = -math.inf
    for i in range(ensemble.count):
        cm = random_energy_constrained_cm(ensemble, i)
        val = directional_derivative(cm, n_s, ch)
        max_d = max(max_d, val)
        if val > 1e-12:
            violations.append({"index": i, "derivative": val})
    return {
        "kind": "directional",
        "count": ensemble.count,
        "N": N,
        "max_derivative": max_d,
        "violations": violations,
        "passed": not violations,
    }


def verify_local_max(n_s: float, N: float, ensemble: ProbeEnsemble,
                     blend_ts=(0.01, 0.05, 0.1)) -> dict:
    """CM-blended probes near the thermal input must not beat its coherent information.

    Positive differences below the perturbative crossing N_s0 are expected
    (classified, not failed); above it they are violations.
    """
    ch = ThermalChannel(N)
    ref = thermal_cm(n_s, ensemble.n)
    base = coherent_information(ref, ch)
    try:
        ns0 = find_ns0(N, "single-mode")
    except NoRootError:
        ns0 = None
    regime = "above-crossing" if ns0 is None or n_s >= ns0 else "below-crossing"
    positives = []
    for i in range(ensemble.count):
        probe = random_energy_constrained_cm(
            ProbeEnsemble(ensemble.n, n_s + 0.5, ensemble.count, ensemble.seed,
                          ensemble.kind, ensemble.max_squeeze),
            i,
        )
        for t in blend_ts:
            blend = CovMatrix(ensemble.n, (1.0 - t) * ref.gamma + t * probe.gamma)
            diff = coherent_information(blend, ch) - base
            if diff > 1e-9:
                positives.append({"index": i, "t": t, "excess": diff})
    return {
        "kind": "local-max",
        "n_s": n_s,
        "N": N,
        "N_s0": ns0,
        "regime": regime,
        "count": ensemble.count,
        "positives": positives,
        "passed": regime == "below-crossing" or not positives,
    }


def scan_delta_ci(N: float, ns_grid, case: str = "two-mode") -> dict:
    """Tabulates the per-eps^2 CI difference over an input-strength grid."""
    f = delta_ci_two_mode if case == "two-mode" else delta_ci_single
    rows = []
    for n_s in ns_grid:
        rep = f(float(n_s), N)
        rows.append({"n_s": float(n_s), "delta_ci": rep.delta_ci,
                     "sign": int(np.sign(rep.delta_ci))})
    signs = [r["sign"] for r in rows if r["sign"] != 0]
    changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    try:
        ns0 = find_ns0(N, case)
    except (NoRootError, DomainError):
        ns0 = None
    return {
        "kind": "delta-ci-scan",
        "N": N,
        "case": case,
        "rows": rows,
        "sign_changes": changes,
        "single_crossing": changes == 1,
        "N_s0": ns0,
    }
