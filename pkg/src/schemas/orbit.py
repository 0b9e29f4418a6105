"""
Pydantic schema for exact closed-form orbits.
"""

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from src.schemas.model import OscillatorModel

OrbitFamily = Literal["ml1", "pl1", "ml2", "pl2", "shifted-ml1", "pl2-real-xi"]


class ClosedFormOrbit(BaseModel):
    """An exact solution of one oscillator family."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    family: OrbitFamily = Field(..., description="Orbit family")
    model: OscillatorModel = Field(..., description="Model the orbit solves")
    amplitudes: tuple[float, ...] = Field(..., min_length=1, description="B_i, C_i or A_i")
    phase: float = Field(default=0.0, description="Common phase")
    omega: float = Field(..., alias="Omega", gt=0.0, description="Orbit frequency (growth rate for cosh)")
    energy: float = Field(..., description="Total energy of the model's Lagrangian on this orbit")

    @property
    def period(self) -> float:
        """2 pi / Omega; infinite for the non-oscillating cosh orbit."""
        if self.family == "pl2-real-xi":
            return float("inf")
        return float(2.0 * math.pi / self.omega)

    @property
    def amplitude_sq(self) -> float:
        """Sum of squared amplitudes."""
        return float(sum(a * a for a in self.amplitudes))
