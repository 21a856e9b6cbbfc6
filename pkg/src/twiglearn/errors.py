"""Exception types shared across the library."""


class TwiglearnError(Exception):
    """Base class for all library errors."""


class TermSyntaxError(TwiglearnError):
    """Malformed term-syntax tree text."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class QuerySyntaxError(TwiglearnError):
    """Malformed query text."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class XmlFormatError(TwiglearnError):
    """XML input outside the supported subset, or bad annotations."""


class ArityMismatchError(TwiglearnError):
    """Boolean query paired with a decorated tree, or vice versa."""


class EmptySampleError(TwiglearnError):
    """A learner was invoked on an empty sample."""


class CapExceededError(TwiglearnError):
    """A brute-force search went past its configured budget."""


class ClassViolationError(TwiglearnError):
    """A query failed a class-membership precondition."""
