"""
Sweep service.

Expands a parameter grid around a base model, integrates every point from its
closed-form initial state on a bounded process pool, and measures frequency
and energy for the Omega tables.
"""

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor

from pydantic import ValidationError

from src.core.exceptions import ConfigError, ConstraintError, DomainError, PdmError
from src.schemas.integrator import IntegratorConfig, IntegratorMethod
from src.schemas.model import EomForm, OscillatorModel, PdmProfile
from src.schemas.orbit import ClosedFormOrbit
from src.schemas.sweep import SweepPoint, SweepRow, SweepSpec
from src.services.closed_form_service import build_orbit, evaluate_orbit, ml2_zeta_target
from src.services.integration_service import (
    energy_drift,
    integrate,
    measure_branch_frequency,
    measure_period,
)

logger = logging.getLogger(__name__)

# Fraction of the quarter period integrated for fractional-power orbits
BRANCH_WINDOW = 0.9


def expand_grid(spec: SweepSpec) -> list[SweepPoint]:
    """
    Cartesian product of the grid axes.

    Args:
        spec: The sweep specification.

    Returns:
        Grid points in row-major order.

    Raises:
        ConfigError: When the grid has no axis or an empty axis.
    """
    axes = spec.grid.axes
    if all(values is None for values in axes.values()):
        raise ConfigError("Sweep grid has no parameter axis")
    empty = [name for name, values in axes.items() if values is not None and not values]
    if empty:
        raise ConfigError(f"Sweep grid axis {', '.join(empty)} is empty")

    profile = spec.model.profile
    lams = spec.grid.lam if spec.grid.lam is not None else [profile.lam]
    upsilons = spec.grid.upsilon if spec.grid.upsilon is not None else [profile.upsilon]
    amplitude_sets = spec.grid.amplitudes if spec.grid.amplitudes is not None else [spec.amplitudes]
    omegas = spec.grid.omega0 if spec.grid.omega0 is not None else [spec.model.omega0]

    return [
        SweepPoint(index=i, lam=lam, upsilon=ups, amplitudes=tuple(amp), omega0=w0)
        for i, (lam, ups, amp, w0) in enumerate(itertools.product(lams, upsilons, amplitude_sets, omegas))
    ]


def point_model(base: OscillatorModel, point: SweepPoint) -> OscillatorModel:
    """
    Base model with a grid point's parameters, re-validated.

    Type-b Mathews-Lakshmanan points get zeta^2 = -/+ 1/lambda so that every
    point stays on the type-II reduction.

    Args:
        base: Base model.
        point: Grid point.

    Returns:
        The point's model.
    """
    profile = PdmProfile.model_validate({**base.profile.model_dump(), "lam": point.lam, "upsilon": point.upsilon})
    fields = {**base.model_dump(), "profile": profile, "omega0": point.omega0}
    if base.family == "type-b" and profile.kind == "mathews-lakshmanan":
        fields["zeta_sq"] = ml2_zeta_target(profile)
    return OscillatorModel.model_validate(fields)


def measure_orbit(
    orbit: ClosedFormOrbit,
    form: EomForm = "el2-direct",
    steps_per_period: int = 2000,
    periods: float = 3.0,
    method: IntegratorMethod = "rk4",
    rel_tol: float = 1e-10,
) -> tuple[float | None, float, float]:
    """
    Integrate from an orbit's initial state and measure its frequency.

    Fractional-power orbits are integrated over 0.9 of a quarter period and
    measured through their linearizing variable; oscillating orbits over
    whole periods and measured from crossings of the dominant axis. The cosh
    orbit has no frequency to measure.

    Args:
        orbit: Orbit supplying the initial state at t = 0.
        form: Equation of motion.
        steps_per_period: RK4 steps per closed-form period.
        periods: Periods integrated for oscillating orbits.
        method: rk4 or rk45.
        rel_tol: rk45 relative tolerance.

    Returns:
        Tuple of (measured Omega or None, initial energy, relative energy drift).
    """
    if orbit.family == "pl2-real-xi":
        t_end = 1.0 / orbit.omega
        dt = t_end / steps_per_period
    elif orbit.family == "pl1":
        t_end = BRANCH_WINDOW * (0.5 * math.pi - orbit.phase) / orbit.omega
        dt = orbit.period / steps_per_period
    else:
        t_end = periods * orbit.period
        dt = orbit.period / steps_per_period

    config = IntegratorConfig.model_validate(
        {"method": method, "dt": dt, "t_end": t_end, "rel_tol": rel_tol}
    )
    trajectory = integrate(orbit.model, form, evaluate_orbit(orbit, 0.0), config)
    drift = energy_drift(trajectory)

    if orbit.family == "pl2-real-xi":
        return None, float(trajectory.energy[0]), drift
    if orbit.family == "pl1":
        omega = measure_branch_frequency(trajectory, orbit.amplitudes, orbit.model.profile.upsilon)
    else:
        dominant = max(range(len(orbit.amplitudes)), key=lambda i: abs(orbit.amplitudes[i]))
        omega = 2.0 * math.pi / measure_period(trajectory, dominant)
    return omega, float(trajectory.energy[0]), drift


def run_point(spec: SweepSpec, point: SweepPoint) -> SweepRow:
    """
    Evaluate one grid point; failures become a status, never an exception.

    Args:
        spec: The sweep specification.
        point: The grid point.

    Returns:
        The measured row.
    """
    row = {
        "index": point.index,
        "lam": point.lam,
        "upsilon": point.upsilon,
        "amplitude_sq": float(sum(a * a for a in point.amplitudes)),
        "omega0": point.omega0,
    }
    try:
        model = point_model(spec.model, point)
        orbit = build_orbit(model, point.amplitudes, spec.phase)
        omega, energy, drift = measure_orbit(
            orbit, spec.eom_form, spec.steps_per_period, spec.periods, spec.method, spec.rel_tol
        )
    except ValidationError as exc:
        return SweepRow(**row, status="aborted", message=f"invalid point: {exc.errors()[0]['msg']}")
    except ConstraintError as exc:
        return SweepRow(**row, status="constraint", message=exc.detail)
    except DomainError as exc:
        return SweepRow(**row, status="domain-exit", message=exc.detail)
    except PdmError as exc:
        return SweepRow(**row, status="aborted", message=exc.detail)
    except Exception as exc:
        logger.exception(f"Point {point.index} raised {type(exc).__name__}")
        return SweepRow(**row, status="aborted", message=f"{type(exc).__name__}: {exc}")

    relative = None if omega is None else abs(omega - orbit.omega) / orbit.omega
    return SweepRow(
        **row,
        status="done",
        omega_closed=orbit.omega,
        omega_measured=omega,
        omega_sq_measured=None if omega is None else omega**2,
        relative_error=relative,
        energy=energy,
        energy_closed=orbit.energy,
        energy_drift=drift,
    )


def _run_indexed(args: tuple[SweepSpec, SweepPoint]) -> SweepRow:
    return run_point(*args)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    """
    Run every grid point, in parallel when jobs > 1.

    Args:
        spec: The sweep specification.
        jobs: Worker processes; 1 runs in-process.

    Returns:
        Rows ordered by grid index.

    Raises:
        ConfigError: Empty grid or jobs < 1.
    """
    if jobs < 1:
        raise ConfigError(f"jobs must be at least 1, got {jobs}")
    points = expand_grid(spec)
    workers = min(jobs, len(points))
    logger.info(f"Sweeping {len(points)} point(s) with {workers} worker(s)")

    rows: list[SweepRow] = []
    if workers == 1:
        rows = [run_point(spec, point) for point in points]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(_run_indexed, [(spec, point) for point in points]))

    for row in rows:
        if row.status == "done":
            logger.info(f"Point {row.index}: Omega = {row.omega_measured}, relative error = {row.relative_error}")
        else:
            logger.warning(f"Point {row.index}: {row.status} ({row.message})")
    return sorted(rows, key=lambda r: r.index)
