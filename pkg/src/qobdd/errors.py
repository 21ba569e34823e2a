"""Exception hierarchy shared by all modules."""


class QobddError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(QobddError, ValueError):
    """Shapes or sizes do not fit together."""


class ValidationError(QobddError, ValueError):
    """A program or document violates a well-formedness rule.

    ``diagnostics`` holds one message per violated rule.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [message])


class ParseError(ValidationError):
    """A document could not be parsed into a program."""


class GuardExceeded(QobddError):
    """A desk-scale size guard would be exceeded."""
