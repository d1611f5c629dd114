"""Gaussian-formalism analysis of the additive thermal-noise channel.

The channel adds N mean photons of isotropic classical Gaussian noise per
mode: gamma -> gamma + 2N I.  Coherent information is S(output) minus the
entropy of the joint reference/output state obtained by sending one half
of the Schmidt purification through the channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintError, DomainError, InvalidStateError
from .symplectic import (
    CovMatrix,
    JointCovMatrix,
    SymplecticForm,
    energy,
    g_entropy,
    gaussian_entropy,
    purify,
    symplectic_eigenvalues,
    thermal_cm,
    trace_functional,
)


@dataclass(frozen=True)
class ThermalChannel:
    """Additive classical noise of mean photon number N (output mean on vacuum)."""

    N: float

    def __post_init__(self):
        if self.N < 0:
            raise DomainError(f"noise photon number must be nonnegative, got {self.N}")


@dataclass(frozen=True)
class GaussianChannel:
    """General Gaussian channel gamma -> M^T gamma M + Nmat on n modes."""

    n: int
    M: np.ndarray = field(repr=False)
    Nmat: np.ndarray = field(repr=False)

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float)
        Nmat = np.asarray(self.Nmat, dtype=float)
        d = 2 * self.n
        if M.shape != (d, d) or Nmat.shape != (d, d):
            raise InvalidStateError("channel matrices must be 2n x 2n")
        Nmat = 0.5 * (Nmat + Nmat.T)
        J = SymplecticForm(self.n).matrix
        # complete positivity: Nmat + i(J - M^T J M) >= 0
        H = Nmat.astype(complex) + 1j * (J - M.T @ J @ M)
        w = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
        if w.min() < -1e-9:
            raise InvalidStateError("channel is not completely positive")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "Nmat", Nmat)


@dataclass(frozen=True)
class SqueezeDiagonalization:
    """Two-mode squeeze frame that diagonalizes the single-mode joint CM."""

    r: float
    nu_A: float
    nu_B: float
    v_A: float
    v_B: float


def apply_channel(cm: CovMatrix, ch) -> CovMatrix:
    """Output CM: gamma + 2N I for thermal noise, M^T gamma M + Nmat in general."""
    if isinstance(ch, ThermalChannel):
        return CovMatrix(cm.n, cm.gamma + 2.0 * ch.N * np.eye(2 * cm.n))
    if isinstance(ch, GaussianChannel):
        if ch.n != cm.n:
            raise InvalidStateError("channel and state mode counts differ")
        return CovMatrix(cm.n, ch.M.T @ cm.gamma @ ch.M + ch.Nmat)
    raise TypeError(f"unsupported channel type {type(ch).__name__}")


def joint_after_channel(cm: CovMatrix, ch) -> JointCovMatrix:
    """Joint output/reference CM after the channel acts on the purified system half."""
    joint = purify(cm)
    gamma = cm.gamma
    beta = joint.cross_block
    if isinstance(ch, ThermalChannel):
        top_left = gamma + 2.0 * ch.N * np.eye(2 * cm.n)
        cross = beta
    elif isinstance(ch, GaussianChannel):
        top_left = ch.M.T @ gamma @ ch.M + ch.Nmat
        cross = ch.M.T @ beta
    else:
        raise TypeError(f"unsupported channel type {type(ch).__name__}")
    top = np.hstack([top_left, cross])
    bot = np.hstack([cross.T, gamma])
    return JointCovMatrix(cm.n, np.vstack([top, bot]))


def coherent_information(cm: CovMatrix, ch: ThermalChannel) -> float:
    """I_c = S(output) - S(joint), in bits; may be negative."""
    out = gaussian_entropy(apply_channel(cm, ch))
    joint = gaussian_entropy(joint_after_channel(cm, ch))
    return out - joint


def mutual_information(cm: CovMatrix, ch: ThermalChannel) -> float:
    """S(input) + S(output) - S(joint), in bits; never below the coherent information."""
    return gaussian_entropy(cm) + coherent_information(cm, ch)


def squeeze_diagonalization(n_s: float, N: float) -> SqueezeDiagonalization:
    """Squeeze parameter and joint symplectic eigenvalues for a thermal input.

    tanh 2r = 2 sqrt(N_s(N_s+1)) / (2 N_s + N + 1); nu_A >= nu_B are the
    symplectic eigenvalues of the single-mode joint CM, and v = (nu-1)/(nu+1).
    """
    if n_s < 0 or N < 0:
        raise DomainError("n_s and N must be nonnegative")
    if n_s == 0 and N == 0:
        return SqueezeDiagonalization(0.0, 1.0, 1.0, 0.0, 0.0)
    a = 2.0 * n_s + 2.0 * N + 1.0
    b = 2.0 * n_s + 1.0
    c = 2.0 * math.sqrt(n_s * (n_s + 1.0))
    s = a * a + b * b - 2.0 * c * c
    p = a * b - c * c
    disc = math.sqrt(max(s * s - 4.0 * p * p, 0.0))
    nu_a = math.sqrt((s + disc) / 2.0)
    nu_b = math.sqrt((s - disc) / 2.0)
    r = 0.5 * math.atanh(c / (b + N))
    return SqueezeDiagonalization(
        r, nu_a, nu_b, (nu_a - 1.0) / (nu_a + 1.0), (nu_b - 1.0) / (nu_b + 1.0)
    )


def directional_derivative(cm_probe: CovMatrix, n_s: float, ch: ThermalChannel) -> float:
    """Derivative of the coherent information when mixing a probe into the thermal input.

    Evaluates -1/4 log2(v_A v_B) sinh(2r) (T(gamma) - 2n sqrt(4 Ebar^2 - 1))
    at t = 0, valid for probes of the same energy as the thermal reference
    (the output term vanishes under that constraint).  Nonpositive for every
    valid equal-energy probe; zero at the thermal reference itself.
    """
    if ch.N <= 0:
        raise DomainError("directional derivative requires positive channel noise")
    n = cm_probe.n
    e_bar = n_s + 0.5
    if abs(energy(cm_probe) - n * e_bar) > 1e-9 * max(1.0, n * e_bar):
        raise ConstraintError(
            f"probe energy {energy(cm_probe):.12g} != reference {n * e_bar:.12g}"
        )
    sq = squeeze_diagonalization(n_s, ch.N)
    slack = trace_functional(cm_probe) - 2.0 * n * math.sqrt(4.0 * e_bar**2 - 1.0)
    return float(-0.25 * math.log2(sq.v_A * sq.v_B) * math.sinh(2.0 * sq.r) * slack)


def asymptotic_capacity(N: float) -> float:
    """max{0, -log2(e N)}; the infinite-energy thermal-input coherent information."""
    if N < 0:
        raise DomainError(f"noise photon number must be nonnegative, got {N}")
    if N == 0:
        return math.inf
    return max(0.0, -math.log2(math.e * N))


def exchange_entropy(cm: CovMatrix, ch: ThermalChannel) -> float:
    """Entropy in bits of the joint reference/output state."""
    return gaussian_entropy(joint_after_channel(cm, ch))


__all__ = [
    "ThermalChannel",
    "GaussianChannel",
    "SqueezeDiagonalization",
    "apply_channel",
    "joint_after_channel",
    "coherent_information",
    "mutual_information",
    "squeeze_diagonalization",
    "directional_derivative",
    "asymptotic_capacity",
    "exchange_entropy",
]
