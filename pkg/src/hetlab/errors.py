"""Error taxonomy for the operator workbench."""


class HetlabError(Exception):
    """Base class for all workbench errors."""


class BasisMismatchError(HetlabError):
    """Two operators with different basis tags were combined."""


class BranchCutError(HetlabError):
    """An eigenvalue sits too close to the principal branch cut."""

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


class IllConditionedError(HetlabError):
    """Eigenvector matrix too ill-conditioned for a spectral function."""


class SingularMatrixError(HetlabError):
    """Inverse-type function requested on a (near-)singular matrix."""


class ConstraintViolationError(HetlabError):
    """Input constants violate a required algebraic constraint."""


class UnwrapError(HetlabError):
    """Phase unwrapping failed: consecutive samples jump too far."""


class ProfileError(HetlabError):
    """A tabulated frequency profile is malformed."""
