"""Exception hierarchy shared by every module of the package."""


class StreamClaimsError(Exception):
    """Base class for all package errors."""


class ValidationError(StreamClaimsError, ValueError):
    """An input object violates its invariants."""


class UndefinedDivisionError(StreamClaimsError, ZeroDivisionError):
    """A rule needs to divide by a zero total (zero weighted claims, zero issue total, zero index)."""


class InvalidWeightError(ValidationError):
    """A weight system or issue weight function produced an inadmissible value."""


class InvalidProbabilityError(ValidationError):
    """A probability system produced something that is not a distribution on the support."""


class StageFeasibilityError(ValidationError):
    """A second-stage problem of a two-stage rule is infeasible."""


class PropertyViolationError(StreamClaimsError):
    """A claims rule failed a property (non-negativity, dummy, positivity, efficiency) at an evaluated point."""


class DomainError(ValidationError):
    """A value falls outside the domain a callable is defined on."""


class InvalidReallocationError(ValidationError):
    """Two problems do not form a valid within-coalition reallocation pair."""
