"""Exception hierarchy shared by every boostrp module."""


class BoostrpError(Exception):
    """Base class for all errors raised by boostrp."""


class ShapeError(BoostrpError, ValueError):
    """Array dimensions do not match what an operation expects."""


class ParseError(BoostrpError, ValueError):
    """A CSV row could not be parsed."""

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class ValidationError(BoostrpError, ValueError):
    """Input values violate a domain constraint (e.g. labels outside {0, 1})."""


class DegenerateOutputError(BoostrpError, ValueError):
    """An output column is constant or single-class where variation is needed."""

    def __init__(self, message, output=None):
        super().__init__(message)
        self.output = output


class ConfigError(BoostrpError, ValueError):
    """Invalid hyper-parameters or incompatible loss/task combination."""


class SizingError(BoostrpError, ValueError):
    """A requested partition would be empty."""


class ConvergenceError(BoostrpError, RuntimeError):
    """An iterative minimizer exceeded its iteration cap."""


class LineSearchError(ConvergenceError):
    """Step-length search failed for a given output."""

    def __init__(self, message, output=None):
        super().__init__(message)
        self.output = output


class RelabelError(BoostrpError, ValueError):
    """A tree leaf received no samples during relabelling."""


class UndefinedMetricError(BoostrpError, ValueError):
    """A metric cannot be computed on the given inputs."""


class ModelFormatError(BoostrpError, ValueError):
    """A model file is malformed or has an unsupported version."""


class ModeError(BoostrpError, ValueError):
    """An operation is not available for this kind of model."""
