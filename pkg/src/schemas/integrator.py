"""
Pydantic schema for integrator settings.
"""

from typing import Literal, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

IntegratorMethod = Literal["rk4", "rk45"]


class IntegratorConfig(BaseModel):
    """How to integrate: method, step or tolerances, span and recording."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    method: IntegratorMethod = Field(default="rk4", description="rk4 fixed step or rk45 adaptive")
    dt: float | None = Field(default=None, gt=0.0, description="Fixed step; initial step for rk45")
    abs_tol: float = Field(default=1e-12, gt=0.0, alias="absTol", description="Adaptive absolute tolerance")
    rel_tol: float = Field(default=1e-10, gt=0.0, alias="relTol", description="Adaptive relative tolerance")
    t_end: float = Field(..., alias="tEnd", description="Final laboratory time; must exceed the initial state time")
    max_steps: int = Field(default=5_000_000, ge=1, alias="maxSteps", description="Step budget, rejected steps included")
    record_every: int = Field(default=1, ge=1, alias="recordEvery", description="Record every k-th accepted step")

    @model_validator(mode="after")
    def check_step(self) -> Self:
        """Require a step for the fixed-step method."""
        if self.method == "rk4" and self.dt is None:
            raise ValueError("rk4 needs dt")
        return self
