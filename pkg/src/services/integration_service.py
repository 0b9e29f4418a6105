"""
Integration service.

Integrates the PDM equations of motion with the re-scaled time appended to
the state, records samples with their energy, and measures periods,
frequencies, energy drift and convergence order from the results.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from src.config import settings
from src.core.exceptions import (
    BranchDomainError,
    CollinearityError,
    ConfigError,
    DomainError,
    InsufficientCrossingsError,
    StepLimitError,
)
from src.core.vectors import FloatArray, as_vector, collinearity_defect
from src.schemas.integrator import IntegratorConfig
from src.schemas.model import EomForm, OscillatorModel
from src.schemas.orbit import ClosedFormOrbit
from src.schemas.state import PhaseState, Trajectory
from src.services.closed_form_service import evaluate_orbit, orbit_kinematics
from src.services.dynamics_service import REDUCED_FORMS, accelerations, energies
from src.services.integrators import Derivative, DormandPrince45, Integrator, RungeKutta4
from src.services.profile_service import time_scale_f

logger = logging.getLogger(__name__)


@dataclass
class _Recorder:
    """Accumulates accepted samples of the augmented state."""

    dim: int
    times: list[float] = field(default_factory=list)
    states: list[FloatArray] = field(default_factory=list)

    def add(self, t: float, y: FloatArray) -> None:
        self.times.append(t)
        self.states.append(y.copy())

    def build(self, model: OscillatorModel, form: EomForm, notes: tuple[str, ...]) -> Trajectory | None:
        if not self.times:
            return None
        stacked = np.vstack(self.states)
        n = self.dim
        x, v, tau = stacked[:, :n], stacked[:, n : 2 * n], stacked[:, 2 * n]
        return Trajectory(
            model=model,
            t=np.asarray(self.times),
            x=x,
            v=v,
            tau=tau,
            energy=np.atleast_1d(energies(model, x, v, form)),
            notes=notes,
        )


def _derivative(model: OscillatorModel, form: EomForm) -> Derivative:
    n = model.dim

    def rhs(t: float, y: FloatArray) -> FloatArray:
        x, v = y[:n], y[n : 2 * n]
        a = accelerations(model, form, x, v)
        f = time_scale_f(model, x)
        return np.concatenate((v, a, [f]))

    return rhs


def _check_initial(model: OscillatorModel, form: EomForm, initial: PhaseState, config: IntegratorConfig) -> None:
    if initial.dim != model.dim:
        raise ConfigError(f"Initial state has {initial.dim} coordinates, model dim is {model.dim}")
    if config.t_end <= initial.t:
        raise ConfigError(f"t_end ({config.t_end}) must exceed the initial time ({initial.t})")
    if form in REDUCED_FORMS:
        defect = float(collinearity_defect(model.anchor(initial.x), initial.v))
        if defect > settings.GATE_TOL:
            raise CollinearityError(
                f"{form} holds only for collinear motion; initial defect {defect:.3g} > {settings.GATE_TOL:g}"
            )


def integrate(
    model: OscillatorModel, form: EomForm, initial: PhaseState, config: IntegratorConfig
) -> Trajectory:
    """
    Integrate the chosen equation of motion from an initial state.

    The state vector is (x_1..x_n, v_1..v_n, tau) with d(tau)/dt = f(x). The
    mass guard runs at every stage evaluation.

    Args:
        model: The oscillator model.
        form: Equation of motion.
        initial: Initial phase state; integration starts at initial.t.
        config: Integrator settings.

    Returns:
        The recorded trajectory, always including the first and last sample.

    Raises:
        CollinearityError: Reduced form with a non-collinear initial state.
        ConfigError: Mismatched dimension or empty time span.
        DomainError: The trajectory left the mass domain; the partial
            trajectory and the last valid state are attached.
        StepLimitError: max_steps exceeded; the partial trajectory is attached.
    """
    _check_initial(model, form, initial, config)
    notes = (f"form={form}", f"method={config.method}")
    rhs = _derivative(model, form)

    recorder = _Recorder(model.dim)
    t = initial.t
    y = np.concatenate((initial.x, initial.v, [initial.t]))
    last_valid = initial

    try:
        rhs(t, y)
        recorder.add(t, y)
        if config.method == "rk4":
            t, y = _run_fixed(RungeKutta4(rhs), config, recorder, t, y)
        else:
            adaptive = DormandPrince45(rhs, abs_tol=config.abs_tol, rel_tol=config.rel_tol)
            t, y = _run_adaptive(adaptive, config, recorder, t, y)
    except DomainError as exc:
        if recorder.times:
            last = recorder.states[-1]
            last_valid = PhaseState(t=recorder.times[-1], x=last[: model.dim], v=last[model.dim : 2 * model.dim])
        partial = recorder.build(model, form, (*notes, "domain-exit"))
        logger.warning(f"Domain exit near t = {last_valid.t:.6g}: {exc.detail}")
        exc.state = last_valid
        exc.partial = partial
        raise
    except StepLimitError as exc:
        exc.partial = recorder.build(model, form, (*notes, "step-limit"))
        raise

    trajectory = recorder.build(model, form, notes)
    assert trajectory is not None
    logger.info(f"Integrated {form} with {config.method} to t = {t:.6g}: {len(trajectory)} samples")
    return trajectory


def _run_fixed(
    integrator: Integrator, config: IntegratorConfig, recorder: _Recorder, t0: float, y: FloatArray
) -> tuple[float, FloatArray]:
    assert config.dt is not None
    span = config.t_end - t0
    count = max(1, math.ceil(span / config.dt - 1e-9))
    if count > config.max_steps:
        raise StepLimitError(f"{count} steps needed, budget is {config.max_steps}")

    t = t0
    for index in range(1, count + 1):
        t_next = config.t_end if index == count else t0 + index * config.dt
        y = integrator.step(t, y, t_next - t).y
        t = t_next
        if index % config.record_every == 0 or index == count:
            recorder.add(t, y)
    return t, y


def _run_adaptive(
    integrator: DormandPrince45, config: IntegratorConfig, recorder: _Recorder, t: float, y: FloatArray
) -> tuple[float, FloatArray]:
    h = config.dt or integrator.initial_step(t, y, config.t_end - t)
    accepted = 0
    attempts = 0
    while t < config.t_end:
        attempts += 1
        if attempts > config.max_steps:
            raise StepLimitError(f"Step budget {config.max_steps} exhausted at t = {t:.6g}")
        remaining = config.t_end - t
        last_step = h >= remaining
        taken = remaining if last_step else h
        result = integrator.step(t, y, taken)
        if not result.accepted:
            h = result.h
            continue
        t = config.t_end if last_step else t + taken
        y = result.y
        accepted += 1
        h = result.h
        if accepted % config.record_every == 0 or t >= config.t_end:
            recorder.add(t, y)
    logger.debug(f"Adaptive run: {accepted} accepted of {attempts} attempted steps")
    return t, y


def energy_drift(trajectory: Trajectory) -> float:
    """
    Largest relative deviation of the recorded energy from its first value.

    Args:
        trajectory: Recorded samples.

    Returns:
        max |E - E0| / |E0| (absolute deviation when E0 = 0).
    """
    energy = trajectory.energy
    reference = abs(float(energy[0]))
    deviation = float(np.max(np.abs(energy - energy[0])))
    return deviation / reference if reference > 0.0 else deviation


def measure_period(traj: Trajectory, axis: int) -> float:
    """
    Period of one coordinate from linearly interpolated level crossings.

    The level is the sample mean. Crossings in the same direction are one
    period apart; their spacings are averaged over both directions. With
    exactly two opposite crossings the half-period spacing is doubled.

    Args:
        traj: Recorded samples.
        axis: Coordinate index.

    Returns:
        The period estimate.

    Raises:
        InsufficientCrossingsError: Fewer than two crossings.
    """
    signal = traj.x[:, axis] - np.mean(traj.x[:, axis])
    t = traj.t
    below = signal < 0.0
    indices = np.nonzero(below[1:] != below[:-1])[0]
    if indices.size < 2:
        raise InsufficientCrossingsError(f"Axis {axis} has {indices.size} crossing(s), need 2")

    s0, s1 = signal[indices], signal[indices + 1]
    crossings = t[indices] - s0 * (t[indices + 1] - t[indices]) / (s1 - s0)
    rising = s1 > s0

    spacings: list[FloatArray] = []
    for direction in (True, False):
        same = crossings[rising == direction]
        if same.size >= 2:
            spacings.append(np.diff(same))
    if spacings:
        return float(np.mean(np.concatenate(spacings)))
    return float(2.0 * (crossings[1] - crossings[0]))


def measure_branch_frequency(traj: Trajectory, amplitudes: ArrayLike, upsilon: float) -> float:
    """
    Frequency of a fractional-power orbit from its linearizing variable.

    w = (x . C_hat / |C|)^(upsilon + 1) satisfies w'' + Omega^2 w = 0; Omega^2
    is the least-squares ratio -<w'', w> / <w, w> with w'' from two passes of
    second-order finite differences (two samples trimmed at each end).

    Args:
        traj: Recorded samples inside one branch window.
        amplitudes: Orbit amplitudes C_i.
        upsilon: Power-law exponent.

    Returns:
        The angular frequency Omega.

    Raises:
        BranchDomainError: Samples on the wrong side of the origin.
        InsufficientCrossingsError: Too few samples for the stencil.
    """
    c = as_vector(amplitudes)
    norm_sq = float(c @ c)
    projection = traj.x @ c / norm_sq
    if np.any(projection <= 0.0):
        raise BranchDomainError("Trajectory leaves the branch x . C > 0")
    if len(traj) < 7:
        raise InsufficientCrossingsError(f"Need at least 7 samples, got {len(traj)}")
    w = projection ** (upsilon + 1.0)
    second = np.gradient(np.gradient(w, traj.t, edge_order=2), traj.t, edge_order=2)
    inner_w, inner_second = w[2:-2], second[2:-2]
    omega_sq = -float(inner_second @ inner_w) / float(inner_w @ inner_w)
    if omega_sq <= 0.0:
        raise BranchDomainError(f"Measured Omega^2 = {omega_sq:.3g} is not positive")
    return math.sqrt(omega_sq)


@dataclass(frozen=True)
class ConvergenceStudy:
    """Errors against a closed form over successive step halvings."""

    steps: tuple[float, ...]
    errors: tuple[float, ...]
    orders: tuple[float, ...]

    @property
    def order(self) -> float:
        """Mean measured order."""
        return float(np.mean(self.orders))


def max_orbit_error(trajectory: Trajectory, orbit: ClosedFormOrbit) -> float:
    """Largest per-component position error against a closed-form orbit."""
    exact, _, _ = orbit_kinematics(orbit, trajectory.t)
    return float(np.max(np.abs(trajectory.x - exact)))


def convergence_order(
    orbit: ClosedFormOrbit,
    form: EomForm = "el2-direct",
    t_end: float | None = None,
    base_steps: int = 40,
    halvings: int = 3,
) -> ConvergenceStudy:
    """
    Measure the RK4 error-reduction exponent against a closed-form orbit.

    Args:
        orbit: Orbit providing the initial state and the exact solution.
        form: Equation of motion.
        t_end: End time; one period when omitted.
        base_steps: Steps per period at the coarsest level.
        halvings: Number of step halvings.

    Returns:
        ConvergenceStudy with log2 error ratios.
    """
    end = orbit.period if t_end is None else t_end
    initial = evaluate_orbit(orbit, 0.0)
    steps: list[float] = []
    errors: list[float] = []
    for level in range(halvings + 1):
        dt = orbit.period / (base_steps * 2**level)
        config = IntegratorConfig(method="rk4", dt=dt, t_end=end)
        errors.append(max_orbit_error(integrate(orbit.model, form, initial, config), orbit))
        steps.append(dt)
    orders = tuple(math.log2(errors[i] / errors[i + 1]) for i in range(halvings))
    logger.info(f"Convergence orders {', '.join(f'{o:.3f}' for o in orders)}")
    return ConvergenceStudy(steps=tuple(steps), errors=tuple(errors), orders=orders)
