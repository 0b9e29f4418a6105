"""
Pytest fixtures and configuration for tests.

Provides standard oscillator models, closed-form orbits and scenario files.
"""

import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

from src.schemas.model import OscillatorModel, PdmProfile
from src.schemas.orbit import ClosedFormOrbit
from src.services.closed_form_service import build_orbit


@pytest.fixture
def sho_model() -> OscillatorModel:
    """Two-dimensional constant-mass oscillator (lambda = 0)."""
    return OscillatorModel(profile=PdmProfile.mathews_lakshmanan(0.0), family="type-a", dim=2)


@pytest.fixture
def ml1_model() -> OscillatorModel:
    """Mathews-Lakshmanan type-I model, plus branch, lambda = 0.5."""
    return OscillatorModel(profile=PdmProfile.mathews_lakshmanan(0.5), family="type-a", dim=2)


@pytest.fixture
def ml1_minus_model() -> OscillatorModel:
    """Mathews-Lakshmanan type-I model, minus branch, lambda = 1."""
    return OscillatorModel(
        profile=PdmProfile.mathews_lakshmanan(1.0, "minus"), family="type-a", dim=2
    )


@pytest.fixture
def pl1_model() -> OscillatorModel:
    """Power-law type-I model m = r^2 (upsilon = 1)."""
    return OscillatorModel(profile=PdmProfile.power_law(1.0, 1.0), family="type-a", dim=2)


@pytest.fixture
def ml2_model() -> OscillatorModel:
    """Mathews-Lakshmanan type-II model on the reduction zeta^2 = -1/lambda."""
    return OscillatorModel(
        profile=PdmProfile.mathews_lakshmanan(0.5),
        family="type-b",
        dim=2,
        zeta=(2.0**0.5, 0.0),
        zeta_sq=-2.0,
    )


@pytest.fixture
def shifted_model() -> OscillatorModel:
    """Shifted Mathews-Lakshmanan model with xi = (0.2, -0.1)."""
    return OscillatorModel(
        profile=PdmProfile.shifted_ml(0.5, (0.2, -0.1)), family="type-c", dim=2
    )


@pytest.fixture
def ml1_orbit(ml1_model: OscillatorModel) -> ClosedFormOrbit:
    """ML1 orbit with B = (0.6, 0.3) and phase 0.3."""
    return build_orbit(ml1_model, (0.6, 0.3), 0.3)


@pytest.fixture
def output_dir(tmp_path: Path) -> Path:
    """Fresh output directory."""
    return tmp_path / "out"


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[str, Any], Path]:
    """Write a JSON document into the temporary directory."""

    def write(name: str, document: Any) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return write


@pytest.fixture
def ml1_scenario() -> dict[str, Any]:
    """Scenario document integrating the ML1 orbit for two periods."""
    return {
        "model": {
            "dim": 2,
            "omega0": 1.0,
            "family": "type-a",
            "profile": {"kind": "mathews-lakshmanan", "lambda": 0.5, "signBranch": "plus"},
        },
        "eomForm": "el2-direct",
        "initial": {"kind": "from_closed_form", "amplitudes": [0.6, 0.3], "phase": 0.3},
        "integrator": {"method": "rk4", "dt": 0.003, "tEnd": 12.0},
        "checks": ["energy-drift", "orbit-error", "energy-closed-form"],
    }
