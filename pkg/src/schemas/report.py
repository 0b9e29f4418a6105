"""
Pydantic schema for verification results.

Defines the record every residual or invariance check produces.
"""

from typing import Self

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field, model_validator


class VerificationReport(BaseModel):
    """Residual statistics of one named check."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    check_name: str = Field(..., alias="check", description="Registered check name")
    max_residual: float = Field(..., ge=0.0, description="Largest absolute residual")
    rms_residual: float = Field(..., ge=0.0, description="Root-mean-square residual")
    tolerance: float = Field(..., gt=0.0, description="Pass threshold on max_residual")
    passed: bool = Field(..., description="Whether max_residual <= tolerance")
    notes: str = Field(default="", description="Findings and context")

    @model_validator(mode="after")
    def check_verdict(self) -> Self:
        """Keep the verdict consistent with the statistics."""
        if self.passed != (self.max_residual <= self.tolerance):
            raise ValueError("passed must equal max_residual <= tolerance")
        return self

    @classmethod
    def from_residuals(
        cls,
        check_name: str,
        residuals: ArrayLike,
        tolerance: float,
        notes: str = "",
    ) -> "VerificationReport":
        """
        Summarize a residual array into a report.

        Non-finite residuals count as infinitely large.

        Args:
            check_name: Registered check name.
            residuals: Residual values of any shape.
            tolerance: Pass threshold.
            notes: Free-form findings.

        Returns:
            The report.
        """
        values = np.abs(np.asarray(residuals, dtype=np.float64)).ravel()
        if values.size == 0:
            max_residual = rms_residual = 0.0
        elif not np.all(np.isfinite(values)):
            max_residual = rms_residual = float("inf")
        else:
            max_residual = float(np.max(values))
            rms_residual = float(np.sqrt(np.mean(values**2)))
        return cls(
            check_name=check_name,
            max_residual=max_residual,
            rms_residual=rms_residual,
            tolerance=tolerance,
            passed=max_residual <= tolerance,
            notes=notes,
        )

    def with_notes(self, notes: str) -> "VerificationReport":
        """Return a copy with notes appended."""
        joined = f"{self.notes} {notes}".strip() if self.notes else notes
        return self.model_copy(update={"notes": joined})

    def to_record(self) -> dict[str, object]:
        """Serialize with the external field names."""
        return self.model_dump(by_alias=True)


class CosineFit(BaseModel):
    """Parameters of a shared-frequency, shared-phase cosine fit."""

    model_config = ConfigDict(frozen=True)

    amplitudes: tuple[float, ...] = Field(..., description="Per-axis amplitudes B_i")
    frequency: float = Field(..., gt=0.0, description="Fitted angular frequency")
    phase: float = Field(..., description="Common phase in (-pi, pi]")
    rms_error: float = Field(..., ge=0.0, description="RMS misfit over all samples and axes")
    iterations: int = Field(default=0, ge=0, description="Function evaluations used")

    def relative_frequency_error(self, expected: float) -> float:
        """Relative deviation of the fitted frequency from an expected value."""
        return abs(self.frequency - expected) / abs(expected)
