"""Exception hierarchy shared across the package."""


class ProbspaceError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(ProbspaceError, ValueError):
    """Operands disagree on feature dimension."""


class EmptyInputError(ProbspaceError, ValueError):
    """An operation that needs data received none."""


class EmptyRegionError(EmptyInputError):
    """A fit was requested for a region with no members."""


class InsufficientInputError(ProbspaceError, ValueError):
    """Too few items to run the requested check."""


class InvalidKError(ProbspaceError, ValueError):
    """A requested region count is outside the valid range."""


class NotFittedError(ProbspaceError):
    """A region is missing its fitted probability space."""


class ParseError(ProbspaceError, ValueError):
    """A data file could not be parsed; the message names line and column."""


class ModelFormatError(ProbspaceError, ValueError):
    """A model file violates the expected schema; the message names the field path."""


class ModelVersionError(ModelFormatError):
    """A model file declares an unsupported format version."""


class SpecValidationError(ProbspaceError, ValueError):
    """A mixture specification violates its invariants."""
