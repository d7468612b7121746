"""Custom exceptions for SUSY Riccati."""

from typing import Any, Dict, Optional

from pydantic import ValidationError as PydanticValidationError


class SusyRiccatiError(Exception):
    """Base exception for SUSY Riccati."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class SingularPointError(SusyRiccatiError):
    """Exception raised when a point lies within the excluded radius of a pole."""

    def __init__(
        self,
        eta: float,
        pole: float,
        excluded_radius: float,
        quantity: str = "function",
        **kwargs: Any,
    ):
        message = (
            f"{quantity} evaluated at eta={eta:.6g}, within {excluded_radius:g} "
            f"of the singular point {pole:.6g}"
        )
        super().__init__(message, **kwargs)
        self.eta = eta
        self.pole = pole
        self.excluded_radius = excluded_radius


class DomainError(SusyRiccatiError):
    """Exception raised for arguments outside the half-line domain."""

    def __init__(self, field: str, value: Any, reason: str, **kwargs: Any):
        message = f"Domain error for {field}={value!r}: {reason}"
        super().__init__(message, **kwargs)
        self.field = field
        self.value = value
        self.reason = reason


class MissingDerivativeError(SusyRiccatiError):
    """Exception raised when a trace lacks a derivative an operation needs."""

    def __init__(self, order: int, operation: str, **kwargs: Any):
        message = f"{operation} needs a trace carrying derivative of order {order}"
        super().__init__(message, **kwargs)
        self.order = order
        self.operation = operation


class PoleParameterError(SusyRiccatiError):
    """Exception raised when the lower 2F1 parameter sits on a pole."""

    def __init__(self, cc: complex, **kwargs: Any):
        message = f"Lower parameter c={cc} is a nonpositive integer and the series does not terminate"
        super().__init__(message, **kwargs)
        self.cc = cc


class CutAmbiguityError(SusyRiccatiError):
    """Exception raised when 2F1 is requested on its branch cut without a side."""

    def __init__(self, z: complex, **kwargs: Any):
        message = f"Argument z={z} lies on the branch cut [1, inf); choose a side of the cut"
        super().__init__(message, **kwargs)
        self.z = z


class BranchConflictError(SusyRiccatiError):
    """Exception raised when a hypergeometric branch of a closed form is undefined."""

    def __init__(self, branch: str, lower_parameter: complex, **kwargs: Any):
        message = (
            f"Branch {branch} is undefined: lower parameter {lower_parameter} "
            "is a nonpositive integer"
        )
        super().__init__(message, **kwargs)
        self.branch = branch
        self.lower_parameter = lower_parameter


class DegeneratePairError(SusyRiccatiError):
    """Exception raised when two traces have a vanishing Wronskian."""

    def __init__(self, wronskian: complex, **kwargs: Any):
        message = f"Wronskian at the first grid point is {abs(wronskian):.3e}; the pair is dependent"
        super().__init__(message, **kwargs)
        self.wronskian = wronskian


class ConfigurationError(SusyRiccatiError):
    """Exception raised for configuration errors."""

    def __init__(self, setting: str, reason: str, **kwargs: Any):
        message = f"Configuration error for {setting}: {reason}"
        super().__init__(message, **kwargs)
        self.setting = setting
        self.reason = reason


class NumericalFailure(SusyRiccatiError):
    """Base class for failures of an iterative numerical method."""


class NoConvergenceError(NumericalFailure):
    """Exception raised when a series or continuation does not converge."""

    def __init__(self, method: str, reason: str, **kwargs: Any):
        message = f"{method} did not converge: {reason}"
        super().__init__(message, **kwargs)
        self.method = method
        self.reason = reason


class StepSizeUnderflowError(NumericalFailure):
    """Exception raised when the integrator step size collapses."""

    def __init__(self, eta: float, reason: str, **kwargs: Any):
        message = f"Integration stalled near eta={eta:.6g}: {reason}"
        super().__init__(message, **kwargs)
        self.eta = eta
        self.reason = reason


class NonFiniteError(NumericalFailure):
    """Exception raised when a computed quantity is NaN or infinite."""

    def __init__(self, quantity: str, **kwargs: Any):
        message = f"Non-finite values in {quantity}"
        super().__init__(message, **kwargs)
        self.quantity = quantity


class MaxDepthError(NumericalFailure):
    """Exception raised when adaptive quadrature exhausts its subdivision budget."""

    def __init__(self, a: float, b: float, reason: str, **kwargs: Any):
        message = f"Quadrature on [{a:.6g}, {b:.6g}] exhausted its subdivisions: {reason}"
        super().__init__(message, **kwargs)
        self.a = a
        self.b = b
        self.reason = reason


def exit_code_for(error: BaseException) -> int:
    """Convert an exception raised during a CLI run to its exit code.

    Args:
        error: Exception raised by a subcommand

    Returns:
        2 for configuration problems, 3 for numerical failures, 1 otherwise
    """
    if isinstance(error, (ConfigurationError, PydanticValidationError, DomainError)):
        return 2
    if isinstance(error, NumericalFailure):
        return 3
    if isinstance(error, SusyRiccatiError):
        return 3
    return 1
