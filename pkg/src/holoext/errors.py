"""Exception hierarchy shared by every module."""


class HoloextError(Exception):
    """Base class for all package errors."""


class InputError(HoloextError, ValueError):
    """Rejected input: wrong shape, out-of-domain point, invalid parameter."""


class DomainError(InputError):
    """A point lies outside the region an operation requires."""


class UnsupportedDomainError(InputError):
    """The operation is not defined for this domain kind or map shape."""


class DegenerateNormalError(InputError):
    """Zero gradient (or ambiguous normal) at a boundary point."""


class DegenerateFunctionalError(InputError):
    """A boundary functional vanishes identically on the test grid."""


class IllConditionedError(InputError):
    """Gram matrix too close to singular to serve as a basis."""

    def __init__(self, message, condition=float("inf")):
        super().__init__(message)
        self.condition = condition


class RangeViolationError(HoloextError):
    """A map sent a probe point outside the closed domain."""


class SearchFailure(HoloextError):
    """A search spent its budget without producing any feasible candidate."""


class ConsistencyError(HoloextError):
    """Two independent computations of the same quantity disagree."""
