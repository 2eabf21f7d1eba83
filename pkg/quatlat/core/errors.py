"""Exception hierarchy for quatlat.

Every error carries the process exit status the CLI reports for it.
"""

from typing import Optional


class QuatLatError(Exception):
    """Base class for all quatlat errors."""
    exit_code = 1


class ProblemSpecError(QuatLatError):
    """Raised when an input document cannot be parsed or is inconsistent."""
    exit_code = 2


class ConfigError(QuatLatError):
    """Raised when configuration values are malformed."""
    exit_code = 2


class PreconditionError(QuatLatError):
    """Raised when a mathematical precondition of an operation fails."""
    exit_code = 3


class NotTotallyRealError(PreconditionError):
    """Raised when a defining polynomial has non-real roots."""
    pass


class ReduciblePolynomialError(PreconditionError):
    """Raised when a defining polynomial factors over Q."""
    pass


class NotTotallyDefiniteError(PreconditionError):
    """Raised when a quaternion algebra is not totally definite."""
    pass


class NotTotallyPositiveError(PreconditionError):
    """Raised when a scaling element is negative at some real embedding."""
    pass


class NotPositiveDefiniteError(PreconditionError):
    """Raised when a Gram matrix is not positive definite."""
    pass


class RankDeficientError(PreconditionError):
    """Raised when a module does not contain a basis of the algebra."""
    pass


class NotAnOrderError(PreconditionError):
    """Raised when a module expected to be an order is not a ring."""
    pass


class ShapeError(PreconditionError, ValueError):
    """Raised on dimension mismatches."""
    pass


class FieldDivisionError(PreconditionError, ZeroDivisionError):
    """Raised on division by zero in a number field or quaternion algebra."""
    pass


class EnumerationBudgetExceeded(QuatLatError):
    """Raised when lattice enumeration visits more nodes than allowed."""
    exit_code = 4

    def __init__(self, budget: int, visited: Optional[int] = None):
        self.budget = budget
        self.visited = visited
        message = f"enumeration exceeded node budget of {budget}"
        if visited is not None:
            message += f" ({visited} nodes visited)"
        super().__init__(message)


class ConsistencyError(QuatLatError):
    """Raised when a computed result contradicts a proven statement."""
    exit_code = 1


class NormOneViolation(ConsistencyError):
    """Raised when a minimal vector of an order lattice has reduced norm other than 1."""
    pass


class ClassificationError(ConsistencyError):
    """Raised when a reduced norm one group fits none of the allowed classes."""
    pass


class PresentationError(ConsistencyError):
    """Raised when presentation generators cannot be found or fail their relations."""
    pass
