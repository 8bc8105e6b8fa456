"""
Exception hierarchy and validation results shared by the library and CLI.

Every failure the library can report is an ``AmiceKitError``. The CLI maps
``DomainError`` (and its subclasses) to exit code 1 and ``SchemaError`` to 2.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional


class ErrorSeverity(Enum):
    """Error severity levels."""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


@dataclass
class ValidationResult:
    """Result of a structural validation (weight matrices, axiom samples)."""
    is_valid: bool
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    severity: ErrorSeverity = ErrorSeverity.LOW

    def add_error(self, message: str, severity: ErrorSeverity = ErrorSeverity.HIGH):
        self.errors.append(message)
        self.is_valid = False
        if _SEVERITY_RANK[severity] > _SEVERITY_RANK[self.severity]:
            self.severity = severity


_SEVERITY_RANK = {
    ErrorSeverity.LOW: 0,
    ErrorSeverity.MEDIUM: 1,
    ErrorSeverity.HIGH: 2,
    ErrorSeverity.CRITICAL: 3,
}


class AmiceKitError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.field = field


class DomainError(AmiceKitError):
    """Input outside the domain of an operation (wrong carrier, basis or side)."""
    pass


class PreconditionError(DomainError):
    """A stated precondition fails, e.g. an unbounded inclusion of weighted spaces."""
    pass


class InsufficientDataError(DomainError):
    """Not enough table entries, moments or truncation order for the request."""
    pass


class CertificateError(DomainError):
    """A tail certificate is missing or too weak to support the claim."""
    pass


class PrecisionError(DomainError):
    """p-adic working precision cannot deliver the requested result."""

    def __init__(self, message: str, achievable_precision: Optional[int] = None,
                 index: Optional[int] = None):
        super().__init__(message)
        self.achievable_precision = achievable_precision
        self.index = index


class InvariantError(AmiceKitError):
    """An internal cross-check between two independent computations disagreed."""
    pass


class SchemaError(AmiceKitError):
    """Command input failed validation; ``field`` names the offending location."""
    pass
