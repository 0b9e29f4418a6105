"""
Pydantic schemas for parameter sweeps.
"""

from typing import Literal, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.schemas.integrator import IntegratorMethod
from src.schemas.model import EomForm, OscillatorModel

SweepStatus = Literal["done", "domain-exit", "constraint", "aborted"]


class SweepGrid(BaseModel):
    """Parameter axes; an omitted axis keeps the base model's value."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    lam: list[float] | None = Field(default=None, alias="lambda", description="Deformation strengths")
    upsilon: list[float] | None = Field(default=None, description="Power-law exponents")
    amplitudes: list[tuple[float, ...]] | None = Field(default=None, description="Amplitude vectors")
    omega0: list[float] | None = Field(default=None, description="Reference frequencies")

    @property
    def axes(self) -> dict[str, list[object] | None]:
        """Grid axes by field name."""
        return {
            "lam": list(self.lam) if self.lam is not None else None,
            "upsilon": list(self.upsilon) if self.upsilon is not None else None,
            "amplitudes": list(self.amplitudes) if self.amplitudes is not None else None,
            "omega0": list(self.omega0) if self.omega0 is not None else None,
        }


class SweepSpec(BaseModel):
    """A base model, a grid around it, and how to integrate each point."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    model: OscillatorModel = Field(..., description="Base model")
    grid: SweepGrid = Field(..., description="Parameter grid")
    amplitudes: tuple[float, ...] = Field(default=(), description="Amplitudes when the grid has none")
    phase: float = Field(default=0.0, description="Common orbit phase")
    eom_form: EomForm = Field(default="el2-direct", alias="eomForm", description="Equation of motion")
    method: IntegratorMethod = Field(default="rk4", description="Integrator")
    steps_per_period: int = Field(default=2000, ge=8, alias="stepsPerPeriod", description="RK4 steps per period")
    periods: float = Field(default=3.0, gt=0.0, description="Periods integrated per oscillating point")
    rel_tol: float = Field(default=1e-10, gt=0.0, alias="relTol", description="rk45 relative tolerance")

    @model_validator(mode="after")
    def check_amplitudes(self) -> Self:
        """Require amplitudes from the grid or the top level."""
        if self.grid.amplitudes is None and not self.amplitudes:
            raise ValueError("amplitudes must be given at the top level or in the grid")
        return self


class SweepPoint(BaseModel):
    """One resolved grid point."""

    model_config = ConfigDict(frozen=True)

    index: int
    lam: float
    upsilon: float
    amplitudes: tuple[float, ...]
    omega0: float


class SweepRow(BaseModel):
    """Measured outcome of one grid point."""

    model_config = ConfigDict(frozen=True)

    index: int
    lam: float
    upsilon: float
    amplitude_sq: float
    omega0: float
    status: SweepStatus
    omega_closed: float | None = None
    omega_measured: float | None = None
    omega_sq_measured: float | None = None
    relative_error: float | None = None
    energy: float | None = None
    energy_closed: float | None = None
    energy_drift: float | None = None
    message: str = ""
