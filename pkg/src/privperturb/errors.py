"""Exception hierarchy shared across the library.

Usage errors (bad arguments, dimension mismatches, violated
preconditions) are ValueErrors so callers can catch them uniformly;
solver failures and theorem violations are RuntimeErrors because they
indicate something went wrong mid-computation rather than bad input.
"""


class UsageError(ValueError):
    """Malformed or inconsistent arguments."""


class DimensionMismatchError(UsageError):
    """Vectors/boxes of incompatible lengths."""


class CapacityError(UsageError):
    """Input exceeds a configured size cap (e.g. vertex enumeration)."""


class PreconditionError(UsageError):
    """A documented precondition of an operation does not hold."""


class AdjacencyError(UsageError):
    """Two agent problems differ in more than one objective."""


class SolverError(RuntimeError):
    """Numerical failure inside the LP solver."""


class TheoremViolationError(RuntimeError):
    """A property that is guaranteed by theory failed empirically."""
