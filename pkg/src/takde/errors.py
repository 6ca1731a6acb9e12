"""Exception hierarchy for the takde package."""


class TakdeError(Exception):
    """Base class for all errors raised by takde."""


class InvalidBandwidthError(TakdeError, ValueError):
    pass


class EmptyBatchError(TakdeError, ValueError):
    pass


class EmptyStreamError(TakdeError, ValueError):
    pass


class GridMismatchError(TakdeError, ValueError):
    pass


class InvalidArgumentError(TakdeError, ValueError):
    pass


class NumericError(TakdeError, ArithmeticError):
    """A quadrature integrand produced a non-finite value."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class StreamFormatError(TakdeError, ValueError):
    """Malformed stream input; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
