"""Exception types shared across the package."""


class CovtrackError(Exception):
    """Base class for package-specific errors."""


class FormatError(CovtrackError):
    """Malformed input data (files, matrices, serialized structures)."""


class PreconditionError(CovtrackError):
    """An operation's documented precondition was violated."""


class ConsistencyError(CovtrackError):
    """Internal cross-check failed; indicates a bug, not bad input."""
