"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """A covariance or density matrix violates a structural invariant."""


class DomainError(ValueError):
    """A scalar parameter is outside its physical domain."""


class ConstraintError(ValueError):
    """An input fails an equality constraint (e.g. fixed energy)."""


class NoRootError(RuntimeError):
    """A bracketing scan found no sign change."""


class TruncationError(RuntimeError):
    """A truncated computation did not converge to the requested tolerance."""
