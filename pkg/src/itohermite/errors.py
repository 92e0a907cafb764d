"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class PoleInDenominator(DomainError):
    pass


class InadmissibleIndex(DomainError):
    """The index pair violates m > -beta - 1."""


class BranchCutError(DomainError):
    """Evaluation point too close to the cut of the principal logarithm."""


class HypothesisViolated(DomainError):
    pass


class ZeroBaseError(DomainError):
    pass


class ShapeMismatch(ValueError):
    pass


class OrderExceeded(IndexError):
    pass


class EigenSolverFailure(RuntimeError):
    pass


class NotConverged(RuntimeError):
    pass


class TruncationNotConverged(NotConverged):
    pass


class BranchWarning(UserWarning):
    """Argument sits on the cut of a principal power; value taken from the upper side."""
