"""
Standardized error handling for the geometric phase toolkit.
"""
import math
import traceback
import logging
from typing import Dict, Any, Optional, Sequence


class GeoPhaseError(Exception):
    """Base exception for geometric phase toolkit errors."""

    def __init__(self, message: str, error_code: str = None, details: Dict[str, Any] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or 'GEOPHASE_ERROR'
        self.details = details or {}


class ValidationError(GeoPhaseError):
    """Raised when input validation fails."""

    def __init__(self, message: str, field: str = None, details: Dict[str, Any] = None,
                 error_code: str = 'VALIDATION_ERROR'):
        super().__init__(message, error_code, details)
        self.field = field


class InvalidParameterError(ValidationError):
    """Raised for non-finite or out-of-range angles and counts."""

    def __init__(self, message: str, field: str = None, details: Dict[str, Any] = None):
        super().__init__(message, field, details, 'INVALID_PARAMETER')


class InvalidChannelError(ValidationError):
    """Raised when a channel pair does not fit the channel count."""

    def __init__(self, message: str, details: Dict[str, Any] = None):
        super().__init__(message, 'pair', details, 'INVALID_CHANNEL')


class InvalidChainError(ValidationError):
    """Raised when a factor chain or netlist is malformed."""

    def __init__(self, message: str, details: Dict[str, Any] = None):
        super().__init__(message, 'chain', details, 'INVALID_CHAIN')


class PreconditionError(ValidationError):
    """Raised when an operation's precondition on its inputs does not hold."""

    def __init__(self, message: str, field: str = None, details: Dict[str, Any] = None):
        super().__init__(message, field, details, 'PRECONDITION_FAILED')


class ParseError(ValidationError):
    """Raised when a matrix, state or JSON document cannot be parsed."""

    def __init__(self, message: str, source: str = None, details: Dict[str, Any] = None):
        super().__init__(message, 'source', details, 'PARSE_ERROR')
        self.source = source


class DegeneracyError(GeoPhaseError):
    """Raised when the geometry collapses and a quantity is undefined."""

    def __init__(self, message: str, error_code: str = None, details: Dict[str, Any] = None):
        super().__init__(message, error_code or 'DEGENERACY_ERROR', details)


class DegenerateLegError(DegeneracyError):
    """Raised when a geodesic leg joins a ray to itself."""

    def __init__(self, message: str, details: Dict[str, Any] = None):
        super().__init__(message, 'DEGENERATE_LEG', details)


class DegenerateTriangleError(DegeneracyError):
    """Raised when two vertices of a triangle coincide."""

    def __init__(self, message: str, leg: int = None, details: Dict[str, Any] = None):
        super().__init__(message, 'DEGENERATE_TRIANGLE', details)
        self.leg = leg


class UndefinedRephaseError(DegeneracyError):
    """Raised when orthogonal states leave the rephasing angle undefined."""

    def __init__(self, message: str, details: Dict[str, Any] = None):
        super().__init__(message, 'UNDEFINED_REPHASE', details)


class UndefinedPhaseError(DegeneracyError):
    """Raised when the argument of a vanishing complex number is requested."""

    def __init__(self, message: str, method: str = None, details: Dict[str, Any] = None):
        super().__init__(message, 'UNDEFINED_PHASE', details)
        self.method = method


class NumericalError(GeoPhaseError):
    """Raised when a computed result fails its own consistency check."""

    def __init__(self, message: str, error_code: str = None, details: Dict[str, Any] = None):
        super().__init__(message, error_code or 'NUMERICAL_ERROR', details)


class InconsistentCycleError(NumericalError):
    """Raised when the composed evolutions do not close the cycle."""

    def __init__(self, message: str, residual: float, details: Dict[str, Any] = None):
        super().__init__(message, 'INCONSISTENT_CYCLE', details)
        self.residual = residual


class DecompositionError(NumericalError):
    """Raised when a pattern solve or round trip misses its tolerance."""

    def __init__(self, message: str, residual: float, details: Dict[str, Any] = None):
        super().__init__(message, 'DECOMPOSITION_FAILED', details)
        self.residual = residual


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the process exit code used by the CLI."""
    if isinstance(error, NumericalError):
        return 2
    return 1


def describe_error(error: BaseException, debug: bool = False) -> Dict[str, Any]:
    """
    Build a structured description of an error for logs and JSON reports.

    Args:
        error: The exception to describe
        debug: Include the traceback when True

    Returns:
        Dictionary with message, error code, details and exit code
    """
    if isinstance(error, GeoPhaseError):
        description = {
            'error': error.message,
            'error_code': error.error_code,
            'exit_code': exit_code_for(error),
        }
        if error.details:
            description['details'] = error.details
    else:
        description = {
            'error': str(error),
            'error_code': 'INTERNAL_ERROR',
            'exit_code': 1,
        }

    if debug:
        description['traceback'] = traceback.format_exc()

    logging.error(f"{description['error_code']}: {description['error']}")
    return description


def validate_finite(value: float, field: str) -> float:
    """
    Validate that a real parameter is finite.

    Args:
        value: Parameter value
        field: Parameter name used in the error

    Returns:
        The value as a float

    Raises:
        InvalidParameterError: If the value is NaN, infinite or not a number
    """
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidParameterError(f"{field} must be a real number, got {value!r}", field=field)

    if not math.isfinite(number):
        raise InvalidParameterError(
            f"{field} must be finite, got {number}",
            field=field,
            details={field: str(number)}
        )
    return number


def validate_range(value: float, field: str, low: float, high: float, slack: float = 1e-12) -> float:
    """
    Validate that a finite parameter lies in [low, high] up to a small slack.

    Values within the slack are clamped onto the interval.

    Raises:
        InvalidParameterError: If the value is outside the interval
    """
    number = validate_finite(value, field)
    if number < low - slack or number > high + slack:
        raise InvalidParameterError(
            f"{field}={number} outside [{low}, {high}]",
            field=field,
            details={field: number, 'low': low, 'high': high}
        )
    return min(max(number, low), high)


def validate_all_finite(values: Sequence[float], fields: Sequence[str]) -> None:
    """Validate several parameters at once."""
    for value, field in zip(values, fields):
        validate_finite(value, field)


def validate_channel_pair(i: int, j: int, n: int) -> None:
    """
    Validate a 1-based channel pair against the channel count.

    Raises:
        InvalidChannelError: Unless 1 <= i < j <= n
    """
    if not (isinstance(i, int) and isinstance(j, int) and isinstance(n, int)):
        raise InvalidChannelError(
            f"Channel indices must be integers, got ({i!r}, {j!r}) with n={n!r}",
            details={'i': i, 'j': j, 'n': n}
        )
    if not (1 <= i < j <= n):
        raise InvalidChannelError(
            f"Channel pair ({i}, {j}) invalid for {n} channels",
            details={'i': i, 'j': j, 'n': n}
        )


def validate_photon_number(value: int) -> int:
    """
    Validate a photon number.

    Raises:
        InvalidParameterError: If the value is not a non-negative integer
    """
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise InvalidParameterError(
            f"Photon number must be a non-negative integer, got {value!r}",
            field='lambda'
        )
    return value


def validate_dimension(expected: int, actual: int, what: str = 'vector') -> None:
    """Raise ValidationError on a dimension mismatch."""
    if expected != actual:
        raise ValidationError(
            f"Dimension mismatch: {what} has dimension {actual}, expected {expected}",
            field='dim',
            details={'expected': expected, 'actual': actual}
        )


def require(condition: bool, message: str, field: Optional[str] = None, **details: Any) -> None:
    """Raise PreconditionError when condition is false."""
    if not condition:
        raise PreconditionError(message, field=field, details=details)
