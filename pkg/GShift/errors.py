# Exception hierarchy shared by every GShift subpackage


class GShiftError(Exception):
    """Base class for all errors raised by the package."""


class MapSyntaxError(GShiftError, ValueError):
    """
    Raised when map DSL or presentation source cannot be parsed.

    Args:
        message: What went wrong
        line: 1-based line number of the offending statement (None if unknown)
        column: 1-based column inside that line (None if unknown)
        text: The offending source fragment
    """

    def __init__(self, message, line=None, column=None, text=None):
        self.message = message
        self.line = line
        self.column = column
        self.text = text
        super().__init__(self._format())

    def _format(self):
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        prefix = f"{', '.join(where)}: " if where else ""
        suffix = f" (in {self.text!r})" if self.text else ""
        return f"{prefix}{self.message}{suffix}"


class PartitionError(MapSyntaxError):
    """Pieces of a map do not partition the integers exactly once."""


class DegreeError(GShiftError, ValueError):
    """A polynomial exceeds the configured maximum degree."""

    def __init__(self, degree, max_degree, context=""):
        self.degree = degree
        self.max_degree = max_degree
        detail = f" while {context}" if context else ""
        super().__init__(f"polynomial degree {degree} exceeds maximum {max_degree}{detail}")


class UnknownGeneratorError(GShiftError, KeyError):
    """A word letter names no generator of the active presentation."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown generator"


class PresentationError(GShiftError, ValueError):
    """Presentation file structure or parameter errors."""


class BudgetExhaustedError(GShiftError, RuntimeError):
    """An operation that must produce a result ran out of budget."""
