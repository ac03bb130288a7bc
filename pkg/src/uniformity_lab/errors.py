"""Exception types shared across the package.

The CLI maps these onto exit codes: precondition and resource failures
exit 3, internal invariant violations exit 5.
"""


class UniformityLabError(Exception):
    """Base class for all package errors."""


class PreconditionError(UniformityLabError, ValueError):
    """An operation was called outside its stated domain."""


class ResourceError(UniformityLabError, RuntimeError):
    """A computation was refused because it would exceed a hard resource cap."""


class InternalCheckError(UniformityLabError, RuntimeError):
    """An internal invariant that should always hold was violated."""


class UsageError(UniformityLabError, ValueError):
    """Malformed command line or input file."""
