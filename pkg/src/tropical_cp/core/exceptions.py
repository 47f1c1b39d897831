from django.core.exceptions import ValidationError


class TropicalError(Exception):
    """Base class for every error raised by tropical_cp."""


class DimensionMismatchError(TropicalError, ValueError):
    pass


class NotCompletelyPositiveError(TropicalError, ValueError):
    pass


class NotNormalizedError(TropicalError, ValueError):
    pass


class NotZeroOneError(TropicalError, ValueError):
    pass


class InvalidCoverError(TropicalError, ValueError):
    pass


class InvalidVertexError(TropicalError, ValueError):
    pass


class DecompositionError(TropicalError):
    """A set of factors does not reproduce its target matrix."""


class SearchBudgetExceeded(TropicalError):
    """The node limit or the deadline of an exact search was reached.

    This is never a refutation: the question asked of the search is still open.
    """

    def __init__(self, message: str, stats=None):
        super().__init__(message)
        self.stats = stats


class MatrixFormatError(ValidationError):
    """Malformed matrix or graph text.

    ``params`` always carries ``line`` (1-based) and, when a single token is at
    fault, ``column`` and ``token``.
    """

    @property
    def location(self) -> str:
        params = self.params or {}
        if "column" in params:
            return f"line {params['line']}, column {params['column']}"
        if "line" in params:
            return f"line {params['line']}"
        return "input"

    def __str__(self) -> str:
        return self.messages[0]
