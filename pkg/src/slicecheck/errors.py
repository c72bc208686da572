"""Exception hierarchy.

Every validation failure raised by the library derives from
:class:`SliceCheckError`; the CLI maps those to exit code 1 and plain
``OSError`` (including :class:`FetchError`) to exit code 2.
"""

from __future__ import annotations


class SliceCheckError(Exception):
    """Base class for all library errors."""


class ArgumentError(SliceCheckError, ValueError):
    """An argument is outside its allowed domain (e.g. ``batch_size=0``)."""


class ParseError(SliceCheckError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(SliceCheckError):
    """A required column is missing or a schema is malformed."""


class ColumnError(SliceCheckError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class KindError(SliceCheckError, TypeError):
    """A column has the wrong cell kind for the requested operation."""


class BoundsError(SliceCheckError, IndexError):
    pass


class DomainError(SliceCheckError):
    """A value falls outside its declared label domain."""


class CountError(SliceCheckError):
    def __init__(self, message: str, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{message}: expected {expected}, got {actual}")


class LabelError(SliceCheckError):
    pass


class OrientationError(LabelError):
    pass


class InversionError(LabelError):
    pass


class CoverageError(LabelError):
    def __init__(self, message: str, values: list):
        self.values = values
        super().__init__(f"{message}: {', '.join(map(str, values))}")


class AlignmentError(SliceCheckError):
    """Two submissions do not wrap the same gold data."""


class FormatError(ParseError):
    pass


class FetchError(SliceCheckError, OSError):
    pass


class IntegrityError(SliceCheckError):
    pass
