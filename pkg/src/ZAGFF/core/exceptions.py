"""
Custom exceptions for the zero-average Gaussian free field toolkit.

This module defines a hierarchy of domain-specific exceptions to provide
consistent error handling across the lattice, Green's function, sampling
and statistics services.

Module Input:
    - Error conditions from numerical kernels and experiment runners
    - Optional error details as dictionaries

Module Output:
    - Structured exception objects with message, details and a stable kind
    - Consistent error interface for catch blocks and the CLI error JSON
"""
from typing import Optional, Any


class ZAGFFError(Exception):
    """
    Base exception for all toolkit errors.

    Provides a common base class for all domain-specific exceptions,
    enabling consistent error handling and machine-readable reporting.

    Attributes:
        message (str): Human-readable error description
        details (dict[str, Any]): Optional structured error details
        kind (str): Stable kebab-case identifier used in CLI error reports
    """

    kind: str = "internal-error"

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        """
        Initialize exception with message and optional details.

        Args:
            message (str): Human-readable error description
            details (Optional[dict[str, Any]]): Additional structured error context
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        """Serialise as the `error` object of the CLI error JSON."""
        return {"kind": self.kind, "message": self.message, "details": self.details}


class ValidationError(ZAGFFError):
    """
    Raised when input validation fails.

    Common scenarios:
        - Point dimension differs from the configured torus dimension
        - Side length n < 2, replicate counts below their minimum
        - Constants built for a different N than the field
        - Test function support reaching below the stored pattern floor
    """

    kind = "validation-error"


class UnsupportedDimensionError(ValidationError):
    """
    Raised when a construction requires d >= 3 and receives a smaller d.

    The Green's function of the walk on Z^d is infinite for d <= 2, so every
    constructor in the toolkit rejects those dimensions.
    """

    kind = "unsupported-dimension"


class ResourceLimitError(ZAGFFError):
    """
    Raised when a request exceeds a configured size limit.

    Common scenarios:
        - N = n^d overflows the addressable field size
        - Dense killed/harmonic solves on more than `dense_max_sites` sites
        - Dense sampler oracle on more than `oracle_max_sites` sites
    """

    kind = "resource-limit"


class QuadratureError(ZAGFFError):
    """
    Raised when the lattice Green's function quadrature does not converge.

    `details` carries the achieved error estimate and the tolerance.
    """

    kind = "quadrature-non-convergence"


class StepBudgetExceeded(ZAGFFError):
    """
    Raised when a simulated walk does not exit within its step cap.

    Walks are never silently truncated.
    """

    kind = "step-budget-exceeded"


class VerificationError(ZAGFFError):
    """
    Raised when an asserted numerical property fails.

    Common scenarios:
        - Convergence gaps |v_n - v| not strictly decreasing in n
        - Singular killed-walk system (cannot happen for proper subsets)
    """

    kind = "verification-failed"


class ExportError(ZAGFFError):
    """
    Raised when reading or writing an exported artefact fails.

    Common scenarios:
        - Bad magic header in a binary field file
        - Truncated payloads or inconsistent CSV columns
    """

    kind = "export-error"
