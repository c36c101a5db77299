"""Exception hierarchy and warning categories shared across the package."""

from __future__ import annotations


class MomentError(Exception):
    """Base class for all errors raised by this package."""


class DimMismatch(MomentError):
    """Objects with incompatible ambient dimensions were combined."""


class DegreeOverflow(MomentError):
    """An operation needs moment entries beyond the truncation degree."""


class FileFormatError(MomentError):
    """A moment, measure, or polynomial file violates its format."""


class ZeroMass(MomentError):
    """The mass ``s_0`` does not allow normalization."""


class TrivialFunctional(ZeroMass):
    """``s_0 = 0``: a positive functional with zero mass vanishes identically."""


class NotPositive(ZeroMass):
    """``s_0 < 0``: the data cannot come from a nonnegative measure."""


class NegativeMoment(MomentError):
    """A moment that must be nonnegative is negative."""


class NotNormalized(MomentError):
    """An operation that requires ``s_0 = 1`` received unnormalized data."""


class EigenFailure(MomentError):
    """An eigenvalue or singular-value computation failed or hit non-finite data."""


class NotPsd(MomentError):
    """A matrix that must be positive semidefinite is not (beyond tolerance)."""


class HypothesisFailure(MomentError):
    """A precondition of a diagnostic check does not hold for the data."""


class RankCollapse(MomentError):
    """The numerical rank of the moment matrix is inconsistent with the data."""


class NotFlat(MomentError):
    """No truncation level exhibits the rank stabilization needed for extraction."""


class CommutatorTooLarge(MomentError):
    """Compressed multiplication operators fail to commute within tolerance."""


class DegenerateSpectrum(MomentError):
    """Repeated random probes failed to separate the operator spectrum."""


class IllConditionedWeights(MomentError):
    """The weight-recovery least-squares problem is rank deficient or yields
    nonpositive weights."""


class ValidationFailure(MomentError):
    """A reconstructed measure does not reproduce the input moments within
    tolerance."""


class NoPreimage(MomentError):
    """No point of the ambient space maps onto a solved atom within tolerance."""


class MembershipViolation(MomentError):
    """A point violates the inequalities that cut out the feasible set."""


class ClampedNodeWarning(UserWarning):
    """A slightly negative quadrature node was clamped to zero."""


class AmbiguousPreimageWarning(UserWarning):
    """Several distinct feasible preimages were found for one atom."""
