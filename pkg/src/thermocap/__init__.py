"""Coherent information and quantum capacity of the thermal-noise bosonic channel."""

from .channel import (
    GaussianChannel,
    SqueezeDiagonalization,
    ThermalChannel,
    apply_channel,
    asymptotic_capacity,
    coherent_information,
    directional_derivative,
    exchange_entropy,
    joint_after_channel,
    mutual_information,
    squeeze_diagonalization,
)
from .errors import (
    ConstraintError,
    DomainError,
    InvalidStateError,
    NoRootError,
    TruncationError,
)
from .perturbation import (
    DeltaCiReport,
    PerturbationSpec,
    certify_capacity,
    delta_ci_general,
    delta_ci_single,
    delta_ci_two_mode,
    exchange_entropy_shift_single,
    exchange_entropy_shift_two_mode,
    find_ns0,
    input_entropy_shift,
    nc_equation,
    output_entropy_shift_single,
    output_entropy_shift_two_mode,
    phi_k,
    phi_prime_km,
    solve_nc,
)
from .symplectic import (
    CovMatrix,
    JointCovMatrix,
    SymplecticForm,
    cm_from_json,
    cm_to_json,
    energy,
    g_entropy,
    gaussian_entropy,
    purify,
    symplectic_eigenvalues,
    thermal_cm,
    trace_functional,
    validate_cm,
)

__version__ = "0.1.0"
