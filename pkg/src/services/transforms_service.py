"""
Transforms service.

Maps PDM trajectories to the constant-mass reference coordinates (tau, q, qt)
and checks that the mapped motion obeys the linear oscillator equation.
"""

import logging

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import cumulative_simpson
from scipy.optimize import least_squares

from src.config import settings
from src.core.exceptions import DomainError, FitDivergedError, NonMonotoneTauError, ValidityError
from src.core.vectors import FloatArray, as_vector, collinearity_defect
from src.schemas.model import OscillatorModel
from src.schemas.report import CosineFit, VerificationReport
from src.schemas.state import PhaseState, ReferenceTrajectory, Trajectory
from src.services.profile_service import model_terms, time_scale_f

logger = logging.getLogger(__name__)

MIN_RESIDUAL_SAMPLES = 5


def _check_type_b_gate(model: OscillatorModel, x: FloatArray, v: FloatArray) -> None:
    if model.has_formal_zeta:
        raise ValidityError(
            f"zeta^2 = {model.zeta_squared:.6g} is formal; q = sqrt(m) zeta needs a real zeta"
        )
    zeta = np.broadcast_to(model.zeta_vector, x.shape)
    worst_zeta = float(np.max(collinearity_defect(x, zeta)))
    worst_velocity = float(np.max(collinearity_defect(x, v)))
    if max(worst_zeta, worst_velocity) > settings.GATE_TOL:
        raise ValidityError(
            "type-b map needs r, v and zeta collinear: "
            f"defect(r, zeta) = {worst_zeta:.3g}, defect(r, v) = {worst_velocity:.3g}"
        )


def map_points(model: OscillatorModel, x: ArrayLike, v: ArrayLike) -> tuple[FloatArray, FloatArray]:
    """
    Batch version of map_point.

    Args:
        model: The oscillator model.
        x: Positions, shape (..., dim).
        v: Velocities, same shape.

    Returns:
        Tuple of (q, qt) arrays shaped like x.

    Raises:
        DomainError: Outside the mass domain or where m < 0.
        ValidityError: type-b samples that are not collinear with zeta.
    """
    position = as_vector(x)
    velocity = as_vector(v)
    y, terms = model_terms(model, position)
    if np.any(terms.m < 0.0):
        raise DomainError("Negative mass multiplier has no real square root")
    root_m = np.sqrt(terms.m)[..., None]

    if model.family == "type-b":
        _check_type_b_gate(model, position, velocity)
        q = root_m * model.zeta_vector
    else:
        q = root_m * y
    qt: FloatArray = root_m * velocity
    return q, qt


def map_point(model: OscillatorModel, state: PhaseState) -> tuple[FloatArray, FloatArray]:
    """
    Map one PDM state to reference coordinates.

    q = sqrt(m) r for type-a, sqrt(m) zeta for type-b and sqrt(m(y)) y for
    type-c; in every family qt = sqrt(m) v.

    Args:
        model: The oscillator model.
        state: The phase state.

    Returns:
        Tuple of (q, qt).

    Raises:
        DomainError: Outside the mass domain.
        ValidityError: type-b state off the collinear line through zeta.
    """
    return map_points(model, state.x, state.v)


def accumulate_tau(model: OscillatorModel, trajectory: Trajectory) -> FloatArray:
    """
    Re-scaled time by quadrature of d(tau)/dt = f along stored samples.

    integrate() already carries tau as a state component; this recomputes it
    for trajectories read from disk or built elsewhere, and to cross-check the
    integrated column. Uses cumulative Simpson integration, fourth-order
    accurate like RK4, and starts from the trajectory's first tau, which
    integrate() seeds with the initial time.

    Args:
        model: The oscillator model.
        trajectory: Recorded samples.

    Returns:
        tau at every sample.

    Raises:
        DomainError: Outside the mass domain.
    """
    f = np.asarray(time_scale_f(model, trajectory.x), dtype=np.float64)
    if len(trajectory) < 3:
        increments = np.concatenate(([0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(trajectory.t))))
    else:
        increments = cumulative_simpson(f, x=trajectory.t, initial=0.0)
    result: FloatArray = trajectory.tau[0] + increments
    return result


def build_reference(model: OscillatorModel, trajectory: Trajectory) -> ReferenceTrajectory:
    """
    Map every sample of a trajectory into reference coordinates.

    Args:
        model: The oscillator model.
        trajectory: Recorded samples carrying tau.

    Returns:
        The reference trajectory.
    """
    q, qt = map_points(model, trajectory.x, trajectory.v)
    return ReferenceTrajectory(tau=trajectory.tau, q=q, qtilde=qt)


def sho_residual(
    ref: ReferenceTrajectory, omega0: float, tolerance: float = 1e-4
) -> VerificationReport:
    """
    Check d(qt)/d(tau) + omega0^2 q = 0 on interior samples.

    The derivative uses three-point second-order weights on the nonuniform tau
    grid; the first and last samples are excluded.

    Args:
        ref: Reference trajectory.
        omega0: Reference angular frequency.
        tolerance: Pass threshold on the largest residual.

    Returns:
        VerificationReport of the residual.

    Raises:
        NonMonotoneTauError: When tau is not strictly monotone.
        ValueError: With fewer than five samples.
    """
    if len(ref) < MIN_RESIDUAL_SAMPLES:
        raise ValueError(f"Need at least {MIN_RESIDUAL_SAMPLES} samples, got {len(ref)}")
    steps = np.diff(ref.tau)
    if not (np.all(steps > 0.0) or np.all(steps < 0.0)):
        raise NonMonotoneTauError(f"tau changes direction {int(np.sum(np.diff(np.sign(steps)) != 0))} time(s)")

    derivative = np.gradient(ref.qtilde, ref.tau, axis=0)
    residual = derivative[1:-1] + omega0**2 * ref.q[1:-1]
    return VerificationReport.from_residuals(
        "sho-residual",
        residual,
        tolerance,
        notes=f"{len(ref) - 2} interior samples, omega0 = {omega0:g}",
    )


def _seed_frequency(tau: FloatArray, signal: FloatArray) -> float:
    centered = signal - np.mean(signal)
    crossings = np.nonzero(np.signbit(centered[1:]) != np.signbit(centered[:-1]))[0]
    span = float(tau[-1] - tau[0])
    if crossings.size >= 2:
        # Consecutive crossings are half a period apart
        spacing = float(tau[crossings[-1]] - tau[crossings[0]]) / (crossings.size - 1)
        return np.pi / spacing
    if crossings.size == 1:
        return np.pi / span
    return 0.5 * np.pi / span


def cosine_fit(ref: ReferenceTrajectory) -> CosineFit:
    """
    Fit q_i(tau) = B_i cos(w tau + phi) with a shared w and phi.

    The frequency is seeded from the zero crossings of the dominant axis and
    the phase from its first sample; the fit itself is a Levenberg-Marquardt
    least-squares solve.

    Args:
        ref: Reference trajectory, ideally spanning several periods.

    Returns:
        CosineFit with the dominant amplitude made positive.

    Raises:
        FitDivergedError: For identically zero data or a failed solve.
    """
    tau = ref.tau
    q = ref.q
    scale = float(np.max(np.abs(q))) if q.size else 0.0
    if scale == 0.0:
        raise FitDivergedError("q is identically zero; frequency is indeterminate")

    dominant = int(np.argmax(np.max(np.abs(q), axis=0)))
    omega = _seed_frequency(tau, q[:, dominant])
    amplitude = float(np.max(np.abs(q[:, dominant])))
    phase = float(np.arccos(np.clip(q[0, dominant] / amplitude, -1.0, 1.0)))
    if ref.qtilde[0, dominant] > 0.0:
        phase = -phase

    basis = np.cos(omega * tau + phase)
    amplitudes = q.T @ basis / max(float(basis @ basis), np.finfo(float).tiny)
    initial = np.concatenate(([omega, phase], amplitudes))

    def residuals(params: FloatArray) -> FloatArray:
        model_values = np.cos(params[0] * tau + params[1])[:, None] * params[2:]
        result: FloatArray = (model_values - q).ravel() / scale
        return result

    budget = settings.FIT_MAX_ITERATIONS * initial.size
    result = least_squares(
        residuals, initial, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=budget
    )
    if not result.success or not np.all(np.isfinite(result.x)):
        raise FitDivergedError(f"least_squares stopped: {result.message}")

    omega, phase = float(result.x[0]), float(result.x[1])
    fitted = np.array(result.x[2:], dtype=np.float64)
    if omega < 0.0:
        omega, phase = -omega, -phase
    if fitted[dominant] < 0.0:
        fitted, phase = -fitted, phase + np.pi
    phase = float(np.angle(np.exp(1j * phase)))
    if omega == 0.0:
        raise FitDivergedError("Fitted frequency collapsed to zero")

    rms = float(np.sqrt(np.mean(result.fun**2))) * scale
    logger.debug(f"Cosine fit: omega={omega:.12g}, phase={phase:.6g}, rms={rms:.3g}, nfev={result.nfev}")
    return CosineFit(
        amplitudes=tuple(float(b) for b in fitted),
        frequency=omega,
        phase=phase,
        rms_error=rms,
        iterations=int(result.nfev),
    )


def verify_f_consistency(
    model: OscillatorModel, trajectory: Trajectory, tolerance: float = 1e-5
) -> VerificationReport:
    """
    Compare dq/dt along a trajectory with sqrt(m) f v.

    dq/dt comes from second-order finite differences in t of the mapped q; the
    analytic side uses the family's f. Interior samples only.

    Args:
        model: The oscillator model.
        trajectory: Recorded samples.
        tolerance: Pass threshold on the largest deviation.

    Returns:
        VerificationReport of the deviation.

    Raises:
        DomainError: Outside the mass domain.
        ValidityError: type-b samples off the collinear line.
    """
    if len(trajectory) < MIN_RESIDUAL_SAMPLES:
        raise ValueError(f"Need at least {MIN_RESIDUAL_SAMPLES} samples, got {len(trajectory)}")
    q, _ = map_points(model, trajectory.x, trajectory.v)
    numeric = np.gradient(q, trajectory.t, axis=0, edge_order=2)

    _, terms = model_terms(model, trajectory.x)
    f = np.asarray(time_scale_f(model, trajectory.x), dtype=np.float64)
    analytic = (np.sqrt(terms.m) * f)[:, None] * trajectory.v
    return VerificationReport.from_residuals(
        "f-consistency",
        (numeric - analytic)[1:-1],
        tolerance,
        notes=f"{model.family} map, dq/dt against sqrt(m) f v",
    )


def reference_energy_report(
    ref: ReferenceTrajectory, omega0: float, tolerance: float = 1e-8
) -> VerificationReport:
    """
    Check that 1/2 |qt|^2 + 1/2 omega0^2 |q|^2 stays constant.

    Valid whether or not tau is monotone.

    Args:
        ref: Reference trajectory.
        omega0: Reference angular frequency.
        tolerance: Pass threshold on the relative drift.

    Returns:
        VerificationReport of the relative drift from the first sample.
    """
    energy = 0.5 * np.sum(ref.qtilde**2, axis=-1) + 0.5 * omega0**2 * np.sum(ref.q**2, axis=-1)
    reference = max(abs(float(energy[0])), np.finfo(float).tiny)
    return VerificationReport.from_residuals(
        "reference-energy",
        (energy - energy[0]) / reference,
        tolerance,
        notes=f"reference energy {float(energy[0]):.12g}",
    )
