"""Exception hierarchy shared across the package."""


class QuasihypError(Exception):
    """Base class for every error raised by this package."""


class MalformedInputError(QuasihypError, ValueError):
    """Input data does not have the expected shape (ragged rows, bad forms...)."""


class DimensionMismatchError(QuasihypError, ValueError):
    """Two objects that must live in the same ambient space do not."""


class InvalidChainError(QuasihypError, ValueError):
    """A chain of subsets is not decreasing or does not end empty."""


class UndefinedOrderError(QuasihypError, ValueError):
    """Vanishing order requested for the zero section."""


class DegenerateError(QuasihypError, ArithmeticError):
    """A formula hits a zero denominator or an unbounded optimum."""


class AcyclicityError(QuasihypError):
    """Some line bundle of a box is outside the acyclic range.

    The offending box index is stored in ``box``.
    """

    def __init__(self, message, box=None):
        super().__init__(message)
        self.box = box


class SizeLimitError(QuasihypError):
    """A requested enumeration exceeds the desk-scale cap."""


class ProblemFileError(QuasihypError):
    """A problem file failed to parse; ``where`` locates the fault."""

    def __init__(self, message, where=""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
