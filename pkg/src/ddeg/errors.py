"""Exception hierarchy shared by every module."""


class DdegError(Exception):
    """Base class for all errors raised by the engine."""


class StructuralError(DdegError):
    """Arity mismatch or malformed object."""


class DomainError(DdegError):
    """An operation was called outside its mathematical domain."""


class ParseError(DdegError):
    """Text input could not be parsed.

    :param message: human readable reason
    :param position: zero-based character offset of the problem
    """

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ResourceLimitError(DdegError):
    """A configured budget was exceeded.

    The ``partial`` attribute carries whatever was computed before the cap
    was hit (for example a best-so-far lower bound or a truncated sequence).
    """

    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class InternalError(DdegError):
    """A state that the underlying theory rules out; indicates a bug."""
