"""
Custom exception classes for the toolkit.

Provides domain-specific exceptions that map to CLI exit codes.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from src.schemas.state import PhaseState, Trajectory


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DOMAIN = 2
EXIT_CONFIG = 3
EXIT_VALIDITY = 4


class PdmError(Exception):
    """Base exception for toolkit-specific errors."""

    exit_code: int = EXIT_FAILURE

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


class DomainError(PdmError):
    """Exception raised when a state leaves the mass domain."""

    exit_code = EXIT_DOMAIN

    def __init__(
        self,
        detail: str = "State outside the mass domain",
        state: PhaseState | None = None,
        partial: Trajectory | None = None,
    ) -> None:
        super().__init__(detail)
        self.state = state
        self.partial = partial


class SingularMassError(DomainError):
    """Exception raised when the mass multiplier vanishes."""

    def __init__(self, detail: str = "Mass multiplier is numerically zero") -> None:
        super().__init__(detail)


class BranchDomainError(DomainError):
    """Exception raised when a fractional power is taken of a non-positive base."""

    def __init__(self, detail: str = "Closed-form branch undefined") -> None:
        super().__init__(detail)


class ConfigError(PdmError):
    """Exception raised for invalid scenario or command-line configuration."""

    exit_code = EXIT_CONFIG

    def __init__(self, detail: str = "Invalid configuration") -> None:
        super().__init__(detail)


class ConstraintError(PdmError):
    """Exception raised when closed-form parameters violate their constraints."""

    exit_code = EXIT_CONFIG

    def __init__(self, detail: str = "Parameter constraint violated") -> None:
        super().__init__(detail)


class ValidityError(PdmError):
    """Exception raised when a transformation is used outside its validity region."""

    exit_code = EXIT_VALIDITY

    def __init__(self, detail: str = "Transformation not valid here") -> None:
        super().__init__(detail)


class CollinearityError(ValidityError):
    """Exception raised when a reduced equation needs collinear motion."""

    def __init__(self, detail: str = "Position and velocity are not collinear") -> None:
        super().__init__(detail)


class NonMonotoneTauError(ValidityError):
    """Exception raised when re-scaled time is not strictly monotone."""

    def __init__(self, detail: str = "Re-scaled time is not strictly monotone") -> None:
        super().__init__(detail)


class FitDivergedError(PdmError):
    """Exception raised when the cosine fit fails."""

    def __init__(self, detail: str = "Cosine fit did not converge") -> None:
        super().__init__(detail)


class StepLimitError(PdmError):
    """Exception raised when an integration exceeds its step budget."""

    def __init__(
        self, detail: str = "Step limit exceeded", partial: Trajectory | None = None
    ) -> None:
        super().__init__(detail)
        self.partial = partial


class InsufficientCrossingsError(PdmError):
    """Exception raised when a period cannot be measured."""

    def __init__(self, detail: str = "Fewer than two zero crossings") -> None:
        super().__init__(detail)
