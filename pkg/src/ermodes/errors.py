"""Error types shared across the package.

Every failure the library can signal is a named exception carrying enough
context to point at the offending input. Nothing here is raised for
ordinary negative answers (an unreachable feature yields an empty result
plus a warning, not an exception).
"""

from __future__ import annotations


class ERModesError(Exception):
    """Base class for all errors raised by this package."""


class IRSyntaxError(ERModesError):
    """Malformed diagram document.

    ``location`` is either a JSON path such as ``entities[2].name`` or a
    ``line:column`` pair when the document is not valid JSON at all.
    """

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.reason = message


class ModeSyntaxError(ERModesError):
    """Malformed mode declaration text."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


class ValidationError(ERModesError):
    """A diagram violates one or more structural invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid diagram: {lines}")


class InvalidFeatureError(ERModesError):
    """A feature reference does not resolve in the diagram."""


class MissingAnnotationError(ERModesError):
    """The requested operation needs an annotation the diagram lacks."""


class PathDiagramMismatchError(ERModesError):
    """A path references elements or traversals the diagram does not admit."""


class UnknownPredicateError(ERModesError):
    """A clause literal uses a predicate with no mode declaration."""
