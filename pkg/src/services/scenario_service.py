"""
Scenario service.

Loads scenario and sweep files, resolves initial states, runs the integration
a scenario describes and evaluates the trajectory checks it lists.
"""

import json
import logging
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ValidationError

from src.config import settings
from src.core.exceptions import ConfigError, PdmError
from src.schemas.orbit import ClosedFormOrbit
from src.schemas.report import VerificationReport
from src.schemas.scenario import ExplicitInitial, Scenario, ScenarioCheck
from src.schemas.state import PhaseState, Trajectory
from src.schemas.sweep import SweepSpec
from src.services.closed_form_service import build_orbit, evaluate_orbit
from src.services.integration_service import energy_drift, integrate, max_orbit_error
from src.services.transforms_service import (
    build_reference,
    cosine_fit,
    reference_energy_report,
    sho_residual,
    verify_f_consistency,
)

logger = logging.getLogger(__name__)

SchemaType = TypeVar("SchemaType", bound=BaseModel)

# Default tolerances of the per-trajectory checks
TRAJECTORY_TOLERANCES: dict[str, float] = {
    "energy-drift": 1e-8,
    "orbit-error": 1e-6,
    "energy-closed-form": 1e-10,
    "sho-residual": 1e-4,
    "cosine-fit": 1e-6,
    "f-consistency": 1e-5,
    "reference-energy": 1e-8,
}


def config_error(exc: ValidationError, source: str) -> ConfigError:
    """
    Translate a schema validation failure into a ConfigError.

    Args:
        exc: The pydantic error.
        source: File or object being validated.

    Returns:
        ConfigError naming the first offending field.
    """
    errors = exc.errors()
    first = errors[0]
    location = ".".join(str(part) for part in first["loc"]) or "<root>"
    more = f" (+{len(errors) - 1} more)" if len(errors) > 1 else ""
    return ConfigError(f"{source}: field '{location}': {first['msg']}{more}")


def parse_document(schema: type[SchemaType], text: str, source: str) -> SchemaType:
    """
    Parse JSON text into a schema.

    Args:
        schema: Target pydantic model.
        text: JSON document.
        source: Name used in error messages.

    Returns:
        The validated object.

    Raises:
        ConfigError: Malformed JSON (with line and column) or schema violations.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        return schema.model_validate(data)
    except ValidationError as exc:
        raise config_error(exc, source) from exc


def _read(path: Path | str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read {path}: {exc.strerror}") from exc


def load_scenario(path: Path | str) -> Scenario:
    """
    Load a scenario file.

    Args:
        path: JSON scenario path.

    Returns:
        The scenario.

    Raises:
        ConfigError: Unreadable, malformed or invalid file.
    """
    return parse_document(Scenario, _read(path), str(path))


def load_sweep_spec(path: Path | str) -> SweepSpec:
    """
    Load a sweep specification file.

    Args:
        path: JSON sweep path.

    Returns:
        The sweep specification.

    Raises:
        ConfigError: Unreadable, malformed or invalid file.
    """
    return parse_document(SweepSpec, _read(path), str(path))


def resolve_initial(scenario: Scenario) -> tuple[PhaseState, ClosedFormOrbit | None]:
    """
    Initial state of a scenario and the orbit it came from, if any.

    Args:
        scenario: The scenario.

    Returns:
        Tuple of (initial state, closed-form orbit or None).

    Raises:
        ConfigError: Explicit state of the wrong dimension.
        ConstraintError: Orbit parameters outside their constraints.
        BranchDomainError: Orbit undefined at t = 0.
    """
    initial = scenario.initial
    model = scenario.model
    if isinstance(initial, ExplicitInitial):
        if len(initial.x) != model.dim or len(initial.v) != model.dim:
            raise ConfigError(f"initial x and v need {model.dim} components")
        return PhaseState.of(initial.t, initial.x, initial.v), None
    orbit = build_orbit(model, initial.amplitudes, initial.phase, initial.family)
    return evaluate_orbit(orbit, 0.0), orbit


def run_scenario(scenario: Scenario) -> tuple[Trajectory, ClosedFormOrbit | None]:
    """
    Integrate a scenario from its initial state.

    Args:
        scenario: The scenario.

    Returns:
        Tuple of (trajectory, source orbit or None).
    """
    initial, orbit = resolve_initial(scenario)
    trajectory = integrate(scenario.model, scenario.eom_form, initial, scenario.integrator)
    return trajectory, orbit


def _trajectory_check(
    check: ScenarioCheck,
    scenario: Scenario,
    trajectory: Trajectory,
    orbit: ClosedFormOrbit | None,
    tolerance: float,
) -> VerificationReport:
    model = scenario.model
    if check == "energy-drift":
        return VerificationReport.from_residuals(check, [energy_drift(trajectory)], tolerance)
    if check in ("orbit-error", "energy-closed-form"):
        if orbit is None:
            raise ConfigError(f"check '{check}' needs an initial state from_closed_form")
        if check == "orbit-error":
            return VerificationReport.from_residuals(check, [max_orbit_error(trajectory, orbit)], tolerance)
        relative = abs(float(trajectory.energy[0]) - orbit.energy) / abs(orbit.energy)
        return VerificationReport.from_residuals(
            check, [relative], tolerance, notes=f"E(0) = {float(trajectory.energy[0]):.15g}, closed form {orbit.energy:.15g}"
        )
    if check == "f-consistency":
        return verify_f_consistency(model, trajectory, tolerance)

    reference = build_reference(model, trajectory)
    if check == "sho-residual":
        return sho_residual(reference, model.omega0, tolerance)
    if check == "reference-energy":
        return reference_energy_report(reference, model.omega0, tolerance)
    fit = cosine_fit(reference)
    return VerificationReport.from_residuals(
        check,
        [fit.relative_frequency_error(model.omega0)],
        tolerance,
        notes=f"fitted omega {fit.frequency:.12g}, rms {fit.rms_error:.3g}",
    )


def run_trajectory_checks(
    scenario: Scenario,
    trajectory: Trajectory,
    orbit: ClosedFormOrbit | None,
    tolerances: dict[str, float] | None = None,
) -> list[VerificationReport]:
    """
    Evaluate the checks a scenario lists on its trajectory.

    A check that raises is recorded as failed with the error in its notes.

    Args:
        scenario: The scenario.
        trajectory: Its integrated trajectory.
        orbit: Source orbit, when the initial state came from one.
        tolerances: Optional overrides by check name.

    Returns:
        One report per listed check.
    """
    limits = {**TRAJECTORY_TOLERANCES, **(tolerances or {})}
    reports: list[VerificationReport] = []
    for check in scenario.checks:
        try:
            report = _trajectory_check(check, scenario, trajectory, orbit, limits[check])
        except (PdmError, ValueError) as exc:
            report = VerificationReport.from_residuals(
                check, [float("inf")], limits[check], notes=f"{type(exc).__name__}: {exc}"
            )
        reports.append(report.model_copy(update={"check_name": check}))
        if not reports[-1].passed:
            logger.warning(f"Scenario check {check} failed: {reports[-1].max_residual:.3g} > {limits[check]:g}")
    return reports


def state_record(state: PhaseState) -> dict[str, Any]:
    """JSON-ready form of a phase state."""
    return {"t": state.t, "x": state.x.tolist(), "v": state.v.tolist()}


def run_summary(
    scenario: Scenario,
    status: str,
    trajectory: Trajectory | None,
    message: str = "",
    reports: list[VerificationReport] | None = None,
) -> dict[str, Any]:
    """
    Summary record of a simulate run.

    Args:
        scenario: The scenario.
        status: ok, domain-exit, step-limit or failed-checks.
        trajectory: Full or partial trajectory, if any.
        message: Error detail for unsuccessful runs.
        reports: Check reports.

    Returns:
        JSON-serializable mapping.
    """
    return {
        "app": settings.APP_NAME,
        "version": settings.APP_VERSION,
        "model": scenario.model.model_dump(mode="json", by_alias=True),
        "form": scenario.eom_form,
        "method": scenario.integrator.method,
        "status": status,
        "message": message,
        "samples": 0 if trajectory is None else len(trajectory),
        "final_state": None if trajectory is None else state_record(trajectory.final_state),
        "energy_drift": None if trajectory is None else energy_drift(trajectory),
        "checks": [report.to_record() for report in reports or []],
    }
