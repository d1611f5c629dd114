"""Covariance-matrix algebra for Gaussian bosonic states.

Conventions: the covariance matrix (CM) of an n-mode state is the real
symmetric 2n x 2n matrix gamma with vacuum = identity; a thermal state of
mean photon number N_s per mode has gamma = (2 N_s + 1) I.  First moments
are dropped throughout.  Entropies are returned in bits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidStateError

SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-9
_PAIR_TOL = 1e-10

_J1 = np.array([[0.0, -1.0], [1.0, 0.0]])


def _block_j(n: int, signs) -> np.ndarray:
    blocks = [s * _J1 for s in signs]
    out = np.zeros((2 * n, 2 * n))
    for i, b in enumerate(blocks):
        out[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = b
    return out


@dataclass(frozen=True)
class SymplecticForm:
    """Symplectic form on n modes.

    kind "standard" is J_n = diag(J, ..., J); kind "flipped" is the joint
    form J_n (+) (-J_n) on 2n modes, used for reference/output systems where
    the reference block carries the opposite orientation.
    """

    n: int
    kind: str = "standard"

    def __post_init__(self):
        if self.kind not in ("standard", "flipped"):
            raise ValueError(f"unknown symplectic form kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("mode count must be positive")

    @property
    def dim(self) -> int:
        return 4 * self.n if self.kind == "flipped" else 2 * self.n

    @property
    def matrix(self) -> np.ndarray:
        if self.kind == "standard":
            return _block_j(self.n, [1.0] * self.n)
        return _block_j(2 * self.n, [1.0] * self.n + [-1.0] * self.n)


def _symmetrize(gamma: np.ndarray, what: str) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise InvalidStateError(f"{what} must be square, got shape {gamma.shape}")
    scale = max(1.0, np.abs(gamma).max())
    if np.abs(gamma - gamma.T).max() > 1e-8 * scale:
        raise InvalidStateError(f"{what} is not symmetric within tolerance")
    return 0.5 * (gamma + gamma.T)


@dataclass(frozen=True)
class CovMatrix:
    """Covariance matrix of an n-mode Gaussian state (symmetrized on construction)."""

    n: int
    gamma: np.ndarray = field(repr=False)

    def __post_init__(self):
        gamma = _symmetrize(self.gamma, "covariance matrix")
        if gamma.shape != (2 * self.n, 2 * self.n):
            raise InvalidStateError(
                f"expected {2 * self.n}x{2 * self.n} matrix for n={self.n}, got {gamma.shape}"
            )
        object.__setattr__(self, "gamma", gamma)

    @property
    def form(self) -> SymplecticForm:
        return SymplecticForm(self.n, "standard")


@dataclass(frozen=True)
class JointCovMatrix:
    """CM of a joint system/reference state (n modes each), with the flipped form."""

    n: int
    gamma_psi: np.ndarray = field(repr=False)

    def __post_init__(self):
        gamma = _symmetrize(self.gamma_psi, "joint covariance matrix")
        if gamma.shape != (4 * self.n, 4 * self.n):
            raise InvalidStateError(
                f"expected {4 * self.n}x{4 * self.n} matrix for n={self.n}, got {gamma.shape}"
            )
        object.__setattr__(self, "gamma_psi", gamma)

    @property
    def form(self) -> SymplecticForm:
        return SymplecticForm(self.n, "flipped")

    @property
    def system_block(self) -> np.ndarray:
        k = 2 * self.n
        return self.gamma_psi[:k, :k]

    @property
    def reference_block(self) -> np.ndarray:
        k = 2 * self.n
        return self.gamma_psi[k:, k:]

    @property
    def cross_block(self) -> np.ndarray:
        k = 2 * self.n
        return self.gamma_psi[:k, k:]


def _gamma_and_form(cm, form: SymplecticForm | None):
    if isinstance(cm, CovMatrix):
        gamma = cm.gamma
        form = form or cm.form
    elif isinstance(cm, JointCovMatrix):
        gamma = cm.gamma_psi
        form = form or cm.form
    else:
        gamma = _symmetrize(np.asarray(cm, dtype=float), "matrix")
        if form is None:
            if gamma.shape[0] % 2:
                raise InvalidStateError("matrix dimension must be even")
            form = SymplecticForm(gamma.shape[0] // 2, "standard")
    if gamma.shape[0] != form.dim:
        raise InvalidStateError(
            f"matrix dimension {gamma.shape[0]} does not match form dimension {form.dim}"
        )
    return gamma, form


def symplectic_eigenvalues(cm, form: SymplecticForm | None = None) -> np.ndarray:
    """Williamson eigenvalues of a CM with respect to a symplectic form.

    They are the absolute imaginary parts of the conjugate eigenvalue pairs
    of form^-1 gamma; returned sorted descending.
    """
    gamma, form = _gamma_and_form(cm, form)
    J = form.matrix
    # J^-1 = -J for any form built from unit J blocks
    w = np.linalg.eigvals(-J @ gamma)
    if np.abs(w.real).max(initial=0.0) > 1e-6 * max(1.0, np.abs(w.imag).max(initial=0.0)):
        raise InvalidStateError("eigenvalues of form^-1 gamma are not purely imaginary")
    nus = np.sort(np.abs(w.imag))
    # conjugate pairs: entries come in equal +/- pairs
    half = nus.reshape(-1, 2)
    if np.abs(half[:, 0] - half[:, 1]).max() > _PAIR_TOL * max(1.0, nus.max()):
        raise InvalidStateError("eigenvalues do not form conjugate pairs")
    return half.mean(axis=1)[::-1].copy()


def validate_cm(cm, form: SymplecticForm | None = None) -> dict:
    """Physicality report: pass iff all symplectic eigenvalues >= 1 - 1e-9."""
    nus = symplectic_eigenvalues(cm, form)
    min_nu = float(nus.min())
    return {"min_nu": min_nu, "passed": bool(min_nu >= 1.0 - PHYSICALITY_TOL)}


def thermal_cm(n_s: float, n: int = 1) -> CovMatrix:
    """CM of the n-mode product thermal state with n_s mean photons per mode."""
    if n_s < 0:
        raise DomainError(f"mean photon number must be nonnegative, got {n_s}")
    return CovMatrix(n, (2.0 * n_s + 1.0) * np.eye(2 * n))


def g_entropy(nbar: float) -> float:
    """Entropy in bits of a thermal state with mean photon number nbar.

    g(x) = (x+1) log2(x+1) - x log2 x, the entropy of the geometric
    spectrum (1-v) v^k with v = x/(x+1).
    """
    if nbar < 0:
        raise DomainError(f"mean photon number must be nonnegative, got {nbar}")
    if nbar == 0:
        return 0.0
    return float((nbar + 1) * np.log2(nbar + 1) - nbar * np.log2(nbar))


def gaussian_entropy(cm, form: SymplecticForm | None = None) -> float:
    """Von Neumann entropy in bits of a Gaussian state given its CM."""
    nus = symplectic_eigenvalues(cm, form)
    return float(sum(g_entropy(max((nu - 1.0) / 2.0, 0.0)) for nu in nus))


def purify(cm: CovMatrix) -> JointCovMatrix:
    """Schmidt purification of a valid CM.

    Returns the joint CM [[gamma, beta], [beta^T, gamma]] with
    beta = J sqrt(-(J^-1 gamma)^2 - I); the result is pure under the
    flipped joint form.
    """
    if not isinstance(cm, CovMatrix):
        cm = CovMatrix(np.asarray(cm).shape[0] // 2, cm)
    gamma = cm.gamma
    J = _block_j(cm.n, [1.0] * cm.n)
    JG = -J @ gamma  # J^-1 gamma
    M = -(JG @ JG) - np.eye(2 * cm.n)
    w, V = np.linalg.eig(M)
    w = w.real
    if w.min() < -1e-9 * max(1.0, np.abs(w).max()):
        raise DomainError("CM has a symplectic eigenvalue below 1; cannot purify")
    w = np.clip(w, 0.0, None)
    sqrtM = np.real(V @ np.diag(np.sqrt(w)) @ np.linalg.inv(V))
    beta = J @ sqrtM
    top = np.hstack([gamma, beta])
    bot = np.hstack([beta.T, gamma])
    return JointCovMatrix(cm.n, np.vstack([top, bot]))


def trace_functional(cm, form: SymplecticForm | None = None) -> float:
    """T(gamma) = 2 sum_k sqrt(nu_k^2 - 1); symplectically invariant, >= 0."""
    nus = symplectic_eigenvalues(cm, form)
    return float(2.0 * np.sum(np.sqrt(np.clip(nus**2 - 1.0, 0.0, None))))


def energy(cm) -> float:
    """Mean energy Tr(gamma)/4 in units hbar*omega = 1 (includes zero point)."""
    gamma, _ = _gamma_and_form(cm, None)
    return float(np.trace(gamma) / 4.0)


def cm_to_json(cm: CovMatrix) -> str:
    """Serialize to {"n": ..., "gamma": row-major list}."""
    return json.dumps({"n": cm.n, "gamma": [float(x) for x in cm.gamma.ravel()]})


def cm_from_json(text: str) -> CovMatrix:
    obj = json.loads(text)
    n = int(obj["n"])
    gamma = np.array(obj["gamma"], dtype=float).reshape(2 * n, 2 * n)
    return CovMatrix(n, gamma)
