"""Exception hierarchy shared by every module of the package."""


class CredalTestingError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CredalTestingError, ValueError):
    """Malformed arguments: shape mismatches, out-of-range parameters."""


class DegenerateDataError(CredalTestingError, ValueError):
    """Data that admits no meaningful answer, e.g. all points identical."""


class InsufficientSamplesError(InvalidInputError):
    pass


class InvalidSplitError(InvalidInputError):
    """A requested estimation/testing split leaves one part empty."""


class ConvergenceError(CredalTestingError, RuntimeError):
    """An iterative solver exhausted its iteration budget."""
