"""
Exception hierarchy.

Every error carries the process exit code the CLI reports for it:
2 usage, 3 input, 4 resource guard, 5 internal consistency.
"""


class AbstabError(Exception):
    """Base class for all library errors."""
    exit_code = 5


class UsageError(AbstabError):
    """Unsupported combination of command-line options."""
    exit_code = 2


class InvalidArgument(AbstabError, ValueError):
    """Argument outside the domain of an operation."""
    exit_code = 2


class DimensionError(AbstabError, ValueError):
    """Operands built for different (d, n) or of different lengths."""
    exit_code = 2


class InputError(AbstabError):
    """Malformed user input (spectrum string, matrix file)."""
    exit_code = 3


class ResourceGuardError(AbstabError):
    """An enumeration would exceed its size guard."""
    exit_code = 4


class ContractViolation(AbstabError):
    """A mathematical precondition does not hold for the given data."""
    exit_code = 5


class ConsistencyError(AbstabError):
    """An internal self-check failed; indicates a construction bug."""
    exit_code = 5


class SolverError(AbstabError):
    """The simplex method tripped its pivot guard."""
    exit_code = 5


class ToleranceError(AbstabError):
    """Floating-point data too close to a decision threshold."""
    exit_code = 5

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class DivergenceError(AbstabError):
    """Polyhedron is unbounded where a polytope was expected."""
    exit_code = 5
