"""Schemas package for models, states, orbits, reports and run files."""

from src.schemas.integrator import IntegratorConfig, IntegratorMethod
from src.schemas.model import EomForm, Family, OscillatorModel, PdmProfile, SignBranch
from src.schemas.orbit import ClosedFormOrbit, OrbitFamily
from src.schemas.report import CosineFit, VerificationReport
from src.schemas.scenario import ClosedFormInitial, ExplicitInitial, OutputSpec, Scenario
from src.schemas.state import PhaseState, ReferenceTrajectory, Trajectory
from src.schemas.sweep import SweepGrid, SweepPoint, SweepRow, SweepSpec

__all__ = [
    # Model
    "PdmProfile",
    "OscillatorModel",
    "SignBranch",
    "Family",
    "EomForm",
    # State
    "PhaseState",
    "Trajectory",
    "ReferenceTrajectory",
    # Orbit
    "ClosedFormOrbit",
    "OrbitFamily",
    # Report
    "VerificationReport",
    "CosineFit",
    # Integrator
    "IntegratorConfig",
    "IntegratorMethod",
    # Scenario
    "Scenario",
    "ExplicitInitial",
    "ClosedFormInitial",
    "OutputSpec",
    # Sweep
    "SweepSpec",
    "SweepGrid",
    "SweepPoint",
    "SweepRow",
]
