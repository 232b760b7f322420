"""
Exception hierarchy for Reeb digraph surgery.
"""

from typing import Any, List, Optional


class ReebSurgeryError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(ReebSurgeryError, ValueError):
    """Malformed input: duplicate ids, dangling references, inconsistent paths."""

    def __init__(self, message: str, element_id: Optional[str] = None):
        super().__init__(message)
        self.element_id = element_id


class ParseError(StructuralError):
    """Syntax error in a serialized document."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ValidityError(ReebSurgeryError, ValueError):
    """A digraph that is not a good Reeb digraph was passed where one is required."""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class ExtremumPointError(ReebSurgeryError, ValueError):
    """A wedge point sits on a local extremum."""


class AnnotationError(ReebSurgeryError, ValueError):
    """A critical-point annotation fails the G-simple check."""

    def __init__(self, message: str, failures: Optional[List[str]] = None):
        super().__init__(message)
        self.failures = failures or []


class PreconditionError(ReebSurgeryError, ValueError):
    """Arguments or host digraph violate an operation's hypotheses."""


class EmbeddingError(ReebSurgeryError, ValueError):
    """An embedding map does not satisfy the embedding conditions."""

    def __init__(self, message: str, violations: Optional[List[str]] = None):
        super().__init__(message)
        self.violations = violations or []


class DisjointnessError(ReebSurgeryError, ValueError):
    """Two embeddings share image points."""


class SurfaceError(ReebSurgeryError, ValueError):
    """Triangulation is not a closed connected surface."""


class GenericityError(ReebSurgeryError, ValueError):
    """Adjacent mesh vertices outside one cluster share a height."""

    def __init__(self, message: str, pair: Optional[tuple] = None):
        super().__init__(message)
        self.pair = pair


class StripNotFoundError(ReebSurgeryError, RuntimeError):
    """No regular strip exists within the refinement cap."""

    def __init__(self, message: str, diagnostic: Optional[dict] = None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}
