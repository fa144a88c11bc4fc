"""Exception hierarchy shared across the package.

Three top-level families map onto the CLI exit codes: validation problems
(bad parameters, malformed files, unusable sample groups) exit 1, plain
I/O failures propagate as OSError and exit 2, and numeric-domain failures
(operations whose result is mathematically undefined for the given data)
exit 3.
"""


class PCQualityError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PCQualityError, ValueError):
    """Input violates a documented precondition or format contract."""


class ParameterDomainError(ValidationError):
    """A named parameter lies outside its legal domain."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class GroupingError(ValidationError):
    """Samples cannot be grouped as requested (mixed codecs/conditions)."""


class DegenerateFitError(ValidationError):
    """Too few distinct abscissae to determine a line."""


class IncompleteDataError(ValidationError):
    """A required compression-condition group is missing from the data."""


class DataFormatError(ValidationError):
    """A file does not conform to its schema; carries a location hint."""


class DuplicateEntryError(DataFormatError):
    """The same key or codec appears twice in one file."""


class MissingNormalsError(ValidationError):
    """An operation requires per-point normals the cloud does not carry."""


class NumericDomainError(PCQualityError, ArithmeticError):
    """The requested computation is undefined for these numeric inputs."""


class UndefinedCorrelationError(NumericDomainError):
    """Correlation is undefined because one input vector is constant."""
