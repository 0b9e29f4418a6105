"""
Pydantic schemas for scenario files.

A scenario names a model, an equation of motion, an initial state, the
integrator settings, the trajectory checks to run and the output file names.
"""

from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field

from src.schemas.integrator import IntegratorConfig
from src.schemas.model import EomForm, OscillatorModel
from src.schemas.orbit import OrbitFamily

ScenarioCheck = Literal[
    "energy-drift",
    "orbit-error",
    "energy-closed-form",
    "sho-residual",
    "cosine-fit",
    "f-consistency",
    "reference-energy",
]


class ExplicitInitial(BaseModel):
    """Initial position and velocity given directly."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["explicit"] = "explicit"
    t: float = Field(default=0.0, description="Initial laboratory time")
    x: tuple[float, ...] = Field(..., min_length=1, description="Initial position")
    v: tuple[float, ...] = Field(..., min_length=1, description="Initial velocity")


class ClosedFormInitial(BaseModel):
    """Initial state taken from a closed-form orbit at t = 0."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["from_closed_form"] = "from_closed_form"
    amplitudes: tuple[float, ...] = Field(..., min_length=1, description="Orbit amplitudes")
    phase: float = Field(default=0.0, description="Orbit phase")
    family: OrbitFamily | None = Field(default=None, description="Orbit family; inferred when omitted")


InitialSpec = Annotated[ExplicitInitial | ClosedFormInitial, Field(discriminator="kind")]


class OutputSpec(BaseModel):
    """Output file names, relative to the output directory."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    trajectory: str = Field(default="trajectory.csv", description="Trajectory CSV")
    reference: str = Field(default="reference.csv", description="Reference-coordinate CSV")
    summary: str = Field(default="summary.json", description="Run summary JSON")
    report: str = Field(default="report.json", description="Check reports JSON")


class Scenario(BaseModel):
    """One simulation or linearization run."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    model: OscillatorModel = Field(..., description="Oscillator model")
    eom_form: EomForm = Field(default="el2-direct", alias="eomForm", description="Equation of motion")
    initial: InitialSpec = Field(..., description="Initial state")
    integrator: IntegratorConfig = Field(..., description="Integrator settings")
    checks: list[ScenarioCheck] = Field(default_factory=list, description="Trajectory checks to run")
    output: OutputSpec = Field(default_factory=OutputSpec, description="Output file names")
