"""
Closed-form service.

Builds the exact orbits of the oscillator families, evaluates them with
analytic velocities and accelerations, and runs the type-II constraint and
sign-regime oracles.
"""

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike

from src.core.exceptions import BranchDomainError, ConstraintError
from src.core.vectors import FloatArray, as_vector
from src.schemas.model import EomForm, OscillatorModel, PdmProfile
from src.schemas.orbit import ClosedFormOrbit, OrbitFamily
from src.schemas.report import VerificationReport
from src.schemas.state import PhaseState
from src.services.dynamics_service import accelerations, energies, residuals

logger = logging.getLogger(__name__)

ML2_CONSTRAINT_TOL = 1e-12


def infer_family(model: OscillatorModel) -> OrbitFamily:
    """
    Orbit family matching a model's profile and substitution family.

    Args:
        model: The oscillator model.

    Returns:
        The orbit family name.
    """
    kind = model.profile.kind
    if kind == "shifted-ml":
        return "shifted-ml1"
    if model.family == "type-b":
        if kind == "mathews-lakshmanan":
            return "ml2"
        return "pl2" if model.zeta_squared < 0.0 else "pl2-real-xi"
    return "ml1" if kind == "mathews-lakshmanan" else "pl1"


def _expected_family_ok(model: OscillatorModel, family: OrbitFamily) -> bool:
    kind, fam = model.profile.kind, model.family
    if family == "ml1":
        return kind == "mathews-lakshmanan" and fam in ("type-a", "type-c")
    if family == "pl1":
        return kind == "power-law" and fam in ("type-a", "type-c")
    if family == "ml2":
        return kind == "mathews-lakshmanan" and fam == "type-b"
    if family in ("pl2", "pl2-real-xi"):
        return kind == "power-law" and fam == "type-b"
    return kind == "shifted-ml" and fam == "type-c"


def _ml_denominator(profile: PdmProfile, amplitude_sq: float) -> float:
    denominator = 1.0 + profile.sign * profile.lam * amplitude_sq
    if denominator <= 0.0:
        raise ConstraintError(
            f"1 - lambda sum B^2 = {denominator:.6g} <= 0; amplitude reaches the singular radius"
        )
    return denominator


def ml2_zeta_target(profile: PdmProfile) -> float:
    """Signed zeta^2 = -/+ 1/lambda that makes type-II equal type-I."""
    if profile.lam <= 0.0:
        raise ConstraintError("type-II reduction needs lambda > 0")
    return -profile.sign / profile.lam


def build_orbit(
    model: OscillatorModel,
    amplitudes: Sequence[float],
    phase: float = 0.0,
    family: OrbitFamily | None = None,
) -> ClosedFormOrbit:
    """
    Build the exact orbit of a model with the given amplitudes and phase.

    Frequencies and energies:
      - ml1, shifted-ml1: Omega^2 = w0^2 / (1 +/- lambda S), E = 1/2 m0 Omega^2 S
      - pl1: Omega = |1 + upsilon| w0, E = 1/2 m0 w0^2 k S^(upsilon + 1)
      - ml2: Omega as ml1, E = 1/2 m0 Omega^2 zeta^2
      - pl2: Omega^2 = w0^2 / (lambda S) with lambda = -1/zeta^2, E = -1/2 k m0 Omega^2
      - pl2-real-xi: kappa^2 = zeta^2 w0^2 / S, E = 1/2 k m0 kappa^2
    where S is the sum of squared amplitudes.

    Args:
        model: The oscillator model.
        amplitudes: B_i, C_i or A_i, one per axis.
        phase: Common phase.
        family: Orbit family; inferred from the model when omitted.

    Returns:
        The orbit.

    Raises:
        ConstraintError: When the parameters admit no real orbit of the family.
    """
    chosen = family or infer_family(model)
    if not _expected_family_ok(model, chosen):
        raise ConstraintError(
            f"{chosen} orbits need a different model (got {model.profile.kind}, {model.family})"
        )
    amp = tuple(float(a) for a in amplitudes)
    if len(amp) != model.dim:
        raise ConstraintError(f"Expected {model.dim} amplitudes, got {len(amp)}")
    amplitude_sq = float(sum(a * a for a in amp))
    if amplitude_sq == 0.0:
        raise ConstraintError("All amplitudes are zero")

    profile = model.profile
    w0_sq = model.omega0**2

    if chosen in ("ml1", "shifted-ml1", "ml2"):
        if chosen == "ml2":
            target = ml2_zeta_target(profile)
            if abs(model.zeta_squared - target) > ML2_CONSTRAINT_TOL * max(1.0, abs(target)):
                raise ConstraintError(
                    f"ml2 needs zeta^2 = {target:.12g}, got {model.zeta_squared:.12g}"
                )
        omega_sq = w0_sq / _ml_denominator(profile, amplitude_sq)
        weight = model.zeta_squared if chosen == "ml2" else amplitude_sq
        energy = 0.5 * model.m0 * omega_sq * weight
    elif chosen == "pl1":
        if profile.upsilon in (-1.0, 0.0):
            raise ConstraintError(f"pl1 needs upsilon not in {{-1, 0}}, got {profile.upsilon}")
        omega_sq = ((1.0 + profile.upsilon) * model.omega0) ** 2
        energy = 0.5 * model.m0 * w0_sq * profile.k * amplitude_sq ** (profile.upsilon + 1.0)
    else:
        if profile.upsilon != -1.0:
            raise ConstraintError(f"{chosen} needs upsilon = -1, got {profile.upsilon}")
        zeta_sq = model.zeta_squared
        if chosen == "pl2":
            if zeta_sq >= 0.0:
                raise ConstraintError(
                    "pl2 oscillates only for lambda sum B^2 > 0, i.e. formal zeta^2 = -1/lambda < 0; "
                    "real zeta gives the pl2-real-xi orbit"
                )
            lam = -1.0 / zeta_sq
            omega_sq = w0_sq / (lam * amplitude_sq)
            energy = -0.5 * profile.k * model.m0 * omega_sq
        else:
            if zeta_sq <= 0.0:
                raise ConstraintError("pl2-real-xi needs a real zeta (zeta^2 > 0)")
            omega_sq = zeta_sq * w0_sq / amplitude_sq
            energy = 0.5 * profile.k * model.m0 * omega_sq

    return ClosedFormOrbit(
        family=chosen,
        model=model,
        amplitudes=amp,
        phase=phase,
        omega=float(np.sqrt(omega_sq)),
        energy=float(energy),
    )


def orbit_kinematics(orbit: ClosedFormOrbit, times: ArrayLike) -> tuple[FloatArray, FloatArray, FloatArray]:
    """
    Analytic position, velocity and acceleration at the given times.

    Args:
        orbit: The orbit.
        times: Time value(s).

    Returns:
        Tuple of (x, v, a), each shaped (..., dim).

    Raises:
        BranchDomainError: pl1 queried where cos(Omega t + phi) <= 0.
    """
    t = np.asarray(times, dtype=np.float64)
    amp = np.asarray(orbit.amplitudes, dtype=np.float64)
    theta = (orbit.omega * t + orbit.phase)[..., None]
    w = orbit.omega

    if orbit.family == "pl2-real-xi":
        ch, sh = np.cosh(theta), np.sinh(theta)
        return amp * ch, amp * w * sh, amp * w**2 * ch

    c, s = np.cos(theta), np.sin(theta)
    if orbit.family == "pl1":
        if np.any(c <= 0.0):
            raise BranchDomainError(
                f"pl1 base cos(Omega t + phi) = {float(np.min(c)):.6g} <= 0; fractional power undefined"
            )
        p = 1.0 / (1.0 + orbit.model.profile.upsilon)
        x = amp * c**p
        v = -amp * p * w * c ** (p - 1.0) * s
        a = amp * p * w**2 * c ** (p - 2.0) * ((p - 1.0) * s**2 - c**2)
        return x, v, a

    # x = B cos(theta) - xi; the shift vanishes for unshifted kinds
    x = amp * c - orbit.model.shift
    return x, -amp * w * s, -amp * w**2 * c


def evaluate_orbit(orbit: ClosedFormOrbit, t: float) -> PhaseState:
    """
    Position and analytic velocity of an orbit at time t.

    Args:
        orbit: The orbit.
        t: Laboratory time.

    Returns:
        The phase state.

    Raises:
        BranchDomainError: pl1 base cosine <= 0 at t.
    """
    x, v, _ = orbit_kinematics(orbit, t)
    return PhaseState(t=t, x=x, v=v)


def orbit_sample_times(orbit: ClosedFormOrbit, count: int, periods: float = 2.0) -> FloatArray:
    """
    Sample times inside the orbit's real-valued window.

    pl1 samples stay within 0.9 of the quarter period around its maximum;
    the cosh orbit uses |kappa t + phi| <= 1.5; others span whole periods.

    Args:
        orbit: The orbit.
        count: Number of samples.
        periods: Periods spanned by oscillating orbits.

    Returns:
        Increasing sample times.
    """
    if orbit.family == "pl1":
        theta = np.linspace(-0.45 * np.pi, 0.45 * np.pi, count)
    elif orbit.family == "pl2-real-xi":
        theta = np.linspace(-1.5, 1.5, count)
    else:
        return np.linspace(0.0, periods * orbit.period, count)
    result: FloatArray = (theta - orbit.phase) / orbit.omega
    return result


def orbit_residuals(
    orbit: ClosedFormOrbit, form: EomForm = "el2-direct", times: ArrayLike | None = None
) -> FloatArray:
    """
    Equation-of-motion residuals of an orbit, scaled per sample.

    Each residual vector is divided by 1 + |a|, with a the orbit's analytic
    acceleration, so samples near a mass pole do not dominate by magnitude.

    Args:
        orbit: The orbit.
        form: Equation of motion to substitute into.
        times: Sample times; defaults to 1000 samples of orbit_sample_times.

    Returns:
        Residual array of shape (samples, dim).
    """
    sample_times = orbit_sample_times(orbit, 1000) if times is None else np.asarray(times, dtype=np.float64)
    x, v, a = orbit_kinematics(orbit, sample_times)
    raw = residuals(orbit.model, form, x, v, a)
    result: FloatArray = raw / (1.0 + np.linalg.norm(a, axis=-1, keepdims=True))
    return result


def _type_a_companion(model: OscillatorModel) -> OscillatorModel:
    return OscillatorModel(
        profile=model.profile,
        family="type-a",
        dim=model.dim,
        omega0=model.omega0,
        m0=model.m0,
    )


def random_in_domain_states(
    model: OscillatorModel, count: int, seed: int, collinear: bool = False
) -> tuple[FloatArray, FloatArray]:
    """
    Seeded random states whose anchor stays inside the mass domain.

    Anchor radii are drawn from [0.05, 1] times min(2, 0.9 / sqrt(lambda)) on
    the minus branch, 2 otherwise.

    Args:
        model: The oscillator model.
        count: Number of states.
        seed: Random seed.
        collinear: Draw velocities parallel to the anchor y = x + xi.

    Returns:
        Tuple of (x, v), each shaped (count, dim).
    """
    rng = np.random.default_rng(seed)
    limit = 2.0
    if model.profile.sign < 0.0 and model.profile.lam > 0.0:
        limit = min(limit, 0.9 / np.sqrt(model.profile.lam))
    directions = rng.normal(size=(count, model.dim))
    directions /= np.linalg.norm(directions, axis=-1, keepdims=True)
    radii = limit * rng.uniform(0.05, 1.0, size=(count, 1))
    if collinear:
        velocities = directions * rng.normal(scale=2.0, size=(count, 1))
    else:
        velocities = rng.normal(size=(count, model.dim))
    return directions * radii - model.shift, velocities


def ml2_constraint_check(
    model: OscillatorModel, samples: int = 512, seed: int = 7, tolerance: float = 1e-12
) -> VerificationReport:
    """
    Check zeta^2 = -/+ 1/lambda and, when it holds, type-II = type-I dynamics.

    With the constraint met, the EL2 accelerations of the model and of its
    type-a companion are compared on seeded random in-domain states (scaled by
    1 + |a|).

    Args:
        model: A type-b Mathews-Lakshmanan model.
        samples: Number of random states.
        seed: Random seed.
        tolerance: Pass threshold.

    Returns:
        VerificationReport; a failed constraint is reported, not raised.
    """
    name = "ml2-constraint"
    if model.family != "type-b" or model.profile.kind != "mathews-lakshmanan" or model.profile.lam <= 0.0:
        return VerificationReport.from_residuals(
            name, [float("inf")], tolerance, notes="needs a type-b mathews-lakshmanan model with lambda > 0"
        )

    target = ml2_zeta_target(model.profile)
    mismatch = abs(model.zeta_squared - target) / max(1.0, abs(target))
    if mismatch > tolerance:
        return VerificationReport.from_residuals(
            name,
            [mismatch],
            tolerance,
            notes=(
                f"constraint violated: zeta^2 = {model.zeta_squared:.12g}, "
                f"{model.profile.sign_branch} branch needs {target:.12g}"
            ),
        )

    x, v = random_in_domain_states(model, samples, seed)
    type_two = accelerations(model, "el2-direct", x, v)
    type_one = accelerations(_type_a_companion(model), "el2-direct", x, v)
    scale = 1.0 + np.linalg.norm(type_one, axis=-1, keepdims=True)
    report = VerificationReport.from_residuals(
        name,
        (type_two - type_one) / scale,
        tolerance,
        notes=f"constraint satisfied (zeta^2 = {target:.12g}); type-II vs type-I accelerations on {samples} states",
    )
    return report


def pl2_sign_regime_report(
    amplitudes: Sequence[float] = (1.0, 0.5),
    omega0: float = 1.0,
    xi: float = 0.8,
    k: float = 1.0,
    samples: int = 1000,
    tolerance: float = 1e-9,
    omega_factor: float = 1.0,
) -> VerificationReport:
    """
    Decide which sign regime of the power-law type-II oscillator solves its equation.

    Three orbits are substituted into the EL2 equation with m = k / r^2 and
    V = 1/2 k w0^2 zeta^2 / r^2:
      - the cosine orbit with formal zeta^2 = -xi^2 (lambda = 1/xi^2, lambda S > 0)
      - the cosine the real-xi parametrization lambda = -1/xi^2 would give, using |Omega|
      - the cosh orbit with real zeta^2 = xi^2
    The first and last must vanish. The energy chain
    1/2 w0^2 xi^2 lambda / S = -1/2 Omega^2 lambda = 1/2 Omega^2 xi^2 is
    evaluated term by term in the oscillating regime.

    Args:
        amplitudes: B_i of the trial orbits.
        omega0: Reference angular frequency.
        xi: Magnitude of the constant vector.
        k: Power-law prefactor.
        samples: Samples per orbit.
        tolerance: Pass threshold on the valid-regime residuals.
        omega_factor: Multiplier applied to every orbit frequency (sensitivity control).

    Returns:
        VerificationReport whose notes state the finding.
    """
    amp = as_vector(amplitudes)
    amplitude_sq = float(amp @ amp)
    direction = amp / np.sqrt(amplitude_sq)
    profile = PdmProfile.power_law(k, -1.0)
    zeta = tuple(float(z) for z in xi * direction)

    formal = OscillatorModel(
        profile=profile, family="type-b", dim=amp.size, omega0=omega0, zeta=zeta, zeta_sq=-(xi**2)
    )
    real = OscillatorModel(profile=profile, family="type-b", dim=amp.size, omega0=omega0, zeta=zeta)

    def scaled(orbit: ClosedFormOrbit) -> ClosedFormOrbit:
        return orbit.model_copy(update={"omega": orbit.omega * omega_factor})

    oscillating = scaled(build_orbit(formal, amp, family="pl2"))
    hyperbolic = scaled(build_orbit(real, amp, family="pl2-real-xi"))

    lam_real = -1.0 / xi**2
    omega_sq_real = omega0**2 / (lam_real * amplitude_sq)
    trial = ClosedFormOrbit(
        family="pl2",
        model=real,
        amplitudes=tuple(amp),
        omega=float(np.sqrt(abs(omega_sq_real))) * omega_factor,
        energy=float("nan"),
    )

    r_osc = orbit_residuals(oscillating, times=orbit_sample_times(oscillating, samples))
    r_trial = orbit_residuals(trial, times=orbit_sample_times(trial, samples))
    r_cosh = orbit_residuals(hyperbolic, times=orbit_sample_times(hyperbolic, samples))
    worst_trial = float(np.max(np.abs(r_trial)))

    lam = 1.0 / xi**2
    xi_sq_formal = -(xi**2)
    omega_sq = oscillating.omega**2
    chain = (
        0.5 * omega0**2 * xi_sq_formal * lam / amplitude_sq,
        -0.5 * omega_sq * lam,
        0.5 * omega_sq * xi_sq_formal,
    )
    x0, v0, _ = orbit_kinematics(oscillating, orbit_sample_times(oscillating, 2)[0])
    measured = float(energies(formal, x0, v0))
    first_equal = np.isclose(chain[0], chain[1], rtol=1e-12)
    second_equal = np.isclose(chain[1], chain[2], rtol=1e-12)

    notes = (
        f"valid regime: lambda*sum(B^2) > 0 (lambda = {lam:.6g}, formal xi^2 = {xi_sq_formal:.6g}) "
        f"solves the equation, max residual {float(np.max(np.abs(r_osc))):.3g}; "
        f"real xi with lambda = -1/xi^2 = {lam_real:.6g} gives Omega^2 = {omega_sq_real:.6g} < 0, "
        f"so it is incompatible with real oscillation (cosine with |Omega| leaves residual {worst_trial:.3g}); "
        f"real xi instead yields x = B cosh(kappa t + phi), kappa^2 = {hyperbolic.omega**2:.6g}, "
        f"max residual {float(np.max(np.abs(r_cosh))):.3g}; "
        f"energy chain terms {chain[0]:.12g}, {chain[1]:.12g}, {chain[2]:.12g} "
        f"(first equality {'holds' if first_equal else 'fails'}, "
        f"second {'holds' if second_equal else 'fails'}, it needs lambda^2 = 1); "
        f"measured energy {measured:.12g} = -1/2 k m0 Omega^2"
    )
    logger.info(f"PL2 sign regime: cosine residual {float(np.max(np.abs(r_osc))):.3g}, trial {worst_trial:.3g}")
    return VerificationReport.from_residuals(
        "pl2-sign-regime",
        np.concatenate([r_osc.ravel(), r_cosh.ravel()]),
        tolerance,
        notes=notes,
    )
