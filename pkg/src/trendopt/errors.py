"""Exception types shared across the library."""


class TrendOptError(Exception):
    """Base class for all library errors."""


class LengthMismatch(TrendOptError):
    """Vector operands do not have equal length."""


class DomainError(TrendOptError):
    """Input outside an operation's numeric domain (sqrt of negative, div by zero)."""


class InvalidConfig(TrendOptError):
    """Optimizer or experiment configuration violates its invariants."""


class KindMismatch(TrendOptError):
    """Optimizer state was created for a different optimizer kind or dimension."""


class InvalidParam(TrendOptError):
    """Scalar parameter outside its admissible range."""


class DegenerateBetas(TrendOptError):
    """beta1 == beta2 makes the telescoped fraction 0/0; use the limit form."""


class EmptySeries(TrendOptError):
    """Smoothing requires a nonempty series."""


class SeriesTooShort(TrendOptError):
    """Series too short for the requested seasonal initialization."""


class InvalidShape(TrendOptError):
    """Model layer sizes are not a valid network shape."""


class ShapeMismatch(TrendOptError):
    """Array arguments are not shape-compatible."""


class ParseError(TrendOptError):
    """Non-numeric cell in a CSV file."""

    def __init__(self, line: int, column: str, value: str):
        self.line = line
        self.column = column
        self.value = value
        super().__init__(f"line {line}, column {column!r}: not a number: {value!r}")


class MissingColumn(TrendOptError):
    """Requested column is absent from the CSV header."""


class TooFewRows(TrendOptError):
    """Dataset has too few rows to split."""


class EmptyInput(TrendOptError):
    """Summary requested over zero run records."""


class DivergenceDetected(TrendOptError):
    """A training run produced a non-finite loss."""
