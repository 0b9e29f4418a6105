"""
Verification service.

Runs the registered suite of residual, invariance, integration and
linearization checks and collects one VerificationReport per check.
"""

import itertools
import logging
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.core.exceptions import ConfigError, PdmError
from src.core.vectors import FloatArray
from src.schemas.integrator import IntegratorConfig
from src.schemas.model import EomForm, OscillatorModel, PdmProfile, SignBranch
from src.schemas.orbit import ClosedFormOrbit
from src.schemas.report import VerificationReport
from src.schemas.state import PhaseState, Trajectory
from src.schemas.sweep import SweepGrid, SweepSpec
from src.services.closed_form_service import (
    build_orbit,
    evaluate_orbit,
    ml2_constraint_check,
    ml2_zeta_target,
    orbit_kinematics,
    orbit_residuals,
    pl2_sign_regime_report,
    random_in_domain_states,
)
from src.services.dynamics_service import (
    PerAxisMassSpec,
    accelerations,
    el1_acceleration,
    el1_residual,
    energies,
    newtonian_vector_residuals,
    per_axis_potential_gradient,
    residuals,
)
from src.services.integration_service import (
    convergence_order,
    energy_drift,
    integrate,
    max_orbit_error,
)
from src.services.profile_service import model_terms, radial_terms, space_scale_g, time_scale_f
from src.services.sweep_service import run_sweep
from src.services.transforms_service import (
    build_reference,
    cosine_fit,
    reference_energy_report,
    sho_residual,
    verify_f_consistency,
)

logger = logging.getLogger(__name__)

FILTER_FAMILIES = frozenset({"ml1", "pl1", "ml2", "pl2", "shifted-ml1", "pl2-real-xi", "el1"})

# Parameter grids of the closed-form residual checks
LAMBDAS = (0.2, 0.5, 1.0)
BRANCHES: tuple[SignBranch, ...] = ("plus", "minus")
OMEGAS = (0.5, 1.0, 2.0)
ML_AMPLITUDES = ((0.8,), (0.6, 0.3), (0.5, 0.4, 0.2))
PL_PREFACTORS = (0.5, 1.0, 2.0)
PL_EXPONENTS = (-0.5, 1.0, 2.0)
PL_AMPLITUDES = ((1.0,), (0.6, 0.8))
XI_VALUES = (0.5, 0.8, 1.2)
SHIFTED_SETS = (
    ((0.6,), (0.2,)),
    ((0.5, 0.3), (0.1, -0.2)),
    ((0.4, 0.3, 0.2), (0.1, 0.1, 0.1)),
)
ORBIT_PHASE = 0.3
RANDOM_STATES = 10_000
ML1_FORMS: tuple[EomForm, ...] = ("el2-direct", "el2-mdot", "el2-radial", "newton-full", "newton-parallel")
STEPS_PER_PERIOD = 2000


@dataclass(frozen=True)
class RegisteredCheck:
    """A named check with its default tolerance and the families it covers."""

    name: str
    tolerance: float
    families: frozenset[str]
    method: str
    description: str


CHECKS: tuple[RegisteredCheck, ...] = (
    RegisteredCheck("residual-ml1", 1e-9, frozenset({"ml1"}), "_residual_ml1", "ML type-I orbit in every EL-II form"),
    RegisteredCheck("residual-pl1", 1e-9, frozenset({"pl1"}), "_residual_pl1", "power-law type-I orbit"),
    RegisteredCheck("residual-ml2", 1e-9, frozenset({"ml2"}), "_residual_ml2", "ML type-II orbit on the reduction"),
    RegisteredCheck("residual-pl2", 1e-9, frozenset({"pl2"}), "_residual_pl2", "power-law type-II cosine orbit"),
    RegisteredCheck(
        "residual-pl2-real-xi", 1e-9, frozenset({"pl2", "pl2-real-xi"}), "_residual_pl2_real_xi", "cosh orbit"
    ),
    RegisteredCheck(
        "residual-shifted-ml1", 1e-9, frozenset({"shifted-ml1"}), "_residual_shifted", "shifted ML type-I orbit"
    ),
    RegisteredCheck("residual-el1", 1e-9, frozenset({"el1"}), "_residual_el1", "per-axis ML orbits under EL-I"),
    RegisteredCheck("pl2-sign-regime", 1e-9, frozenset({"pl2"}), "_pl2_sign_regime", "power-law type-II sign regime"),
    RegisteredCheck("ml2-constraint", 1e-12, frozenset({"ml2"}), "_ml2_constraint", "type-II equals type-I"),
    RegisteredCheck("form-agreement", 1e-12, frozenset(), "_form_agreement", "EL-II forms on collinear states"),
    RegisteredCheck("newton-vector", 1e-12, frozenset(), "_newton_vector", "Newtonian vector equation"),
    RegisteredCheck("scale-factors", 1e-12, frozenset(), "_scale_factors", "f and g = m f^2 per family"),
    RegisteredCheck("el1-decoupling", 1e-12, frozenset({"el1"}), "_el1_decoupling", "per-axis independence"),
    RegisteredCheck("el1-scale-factors", 1e-7, frozenset({"el1"}), "_el1_scale_factors", "per-axis g_i = m_i f_i^2"),
    RegisteredCheck(
        "energy-closed-form",
        1e-10,
        frozenset({"ml1", "pl1", "shifted-ml1", "ml2", "pl2"}),
        "_energy_closed_form",
        "orbit energy against its formula",
    ),
    RegisteredCheck("integration-rk4-ml1", 1e-6, frozenset({"ml1"}), "_integration_rk4", "RK4 against ML1"),
    RegisteredCheck("integration-rk45-ml1", 1e-8, frozenset({"ml1"}), "_integration_rk45", "RK45 against ML1"),
    RegisteredCheck(
        "energy-drift-ml1", 1e-8, frozenset({"ml1"}), "_energy_drift", "RK4 and RK45 energy drift on ML1"
    ),
    RegisteredCheck("sho-residual-ml1", 1e-4, frozenset({"ml1"}), "_sho_residual_ml1", "linearized ML1"),
    RegisteredCheck("cosine-fit-ml1", 1e-6, frozenset({"ml1"}), "_cosine_fit_ml1", "fitted frequency of mapped ML1"),
    RegisteredCheck("f-consistency-ml1", 1e-5, frozenset({"ml1"}), "_f_consistency_ml1", "dq/dt = sqrt(m) f v"),
    RegisteredCheck(
        "sho-residual-shifted-ml1", 1e-4, frozenset({"shifted-ml1"}), "_sho_residual_shifted", "linearized shifted ML1"
    ),
    RegisteredCheck(
        "cosine-fit-shifted-ml1", 1e-6, frozenset({"shifted-ml1"}), "_cosine_fit_shifted", "fitted shifted frequency"
    ),
    RegisteredCheck(
        "reference-energy-ml2", 1e-7, frozenset({"ml2"}), "_reference_energy_ml2", "reference energy of mapped ML2"
    ),
    RegisteredCheck("convergence-rk4", 0.3, frozenset({"ml1"}), "_convergence_rk4", "RK4 order, residual |p - 4|"),
    RegisteredCheck("frequency-ml1", 1e-4, frozenset({"ml1"}), "_frequency_ml1", "swept ML1 frequency law"),
    RegisteredCheck("frequency-pl1", 1e-4, frozenset({"pl1"}), "_frequency_pl1", "swept power-law frequency law"),
)

CHECKS_BY_NAME: dict[str, RegisteredCheck] = {check.name: check for check in CHECKS}


def _unit(values: Iterable[float]) -> tuple[float, ...]:
    vector = np.asarray(tuple(values), dtype=np.float64)
    return tuple(float(c) for c in vector / np.linalg.norm(vector))


def ml1_orbits() -> list[ClosedFormOrbit]:
    """ML type-I orbits over lambda, branch, omega0 and amplitude sets."""
    return [
        build_orbit(
            OscillatorModel(
                profile=PdmProfile.mathews_lakshmanan(lam, branch), family="type-a", dim=len(amp), omega0=w0
            ),
            amp,
            ORBIT_PHASE,
        )
        for lam, branch, w0, amp in itertools.product(LAMBDAS, BRANCHES, OMEGAS, ML_AMPLITUDES)
    ]


def pl1_orbits() -> list[ClosedFormOrbit]:
    """Power-law type-I orbits over k, upsilon, omega0 and amplitude sets."""
    return [
        build_orbit(
            OscillatorModel(profile=PdmProfile.power_law(k, ups), family="type-a", dim=len(amp), omega0=w0),
            amp,
            ORBIT_PHASE,
        )
        for k, ups, w0, amp in itertools.product(PL_PREFACTORS, PL_EXPONENTS, OMEGAS, PL_AMPLITUDES)
    ]


def ml2_model(lam: float, branch: SignBranch, omega0: float, direction: tuple[float, ...]) -> OscillatorModel:
    """ML type-II model with zeta along a direction and zeta^2 on the reduction target."""
    profile = PdmProfile.mathews_lakshmanan(lam, branch)
    target = ml2_zeta_target(profile)
    zeta = tuple(abs(target) ** 0.5 * c for c in _unit(direction))
    return OscillatorModel(
        profile=profile, family="type-b", dim=len(zeta), omega0=omega0, zeta=zeta, zeta_sq=target
    )


def ml2_orbits() -> list[ClosedFormOrbit]:
    """ML type-II orbits on the same grid as the type-I ones."""
    return [
        build_orbit(ml2_model(lam, branch, w0, amp), amp, ORBIT_PHASE)
        for lam, branch, w0, amp in itertools.product(LAMBDAS, BRANCHES, OMEGAS, ML_AMPLITUDES)
    ]


def _pl2_model(k: float, xi: float, omega0: float, amp: tuple[float, ...], formal: bool) -> OscillatorModel:
    zeta = tuple(xi * c for c in _unit(amp))
    return OscillatorModel(
        profile=PdmProfile.power_law(k, -1.0),
        family="type-b",
        dim=len(amp),
        omega0=omega0,
        zeta=zeta,
        zeta_sq=-(xi**2) if formal else xi**2,
    )


def pl2_orbits(real_xi: bool = False) -> list[ClosedFormOrbit]:
    """Power-law type-II orbits: cosine with formal zeta, or cosh with real zeta."""
    return [
        build_orbit(_pl2_model(k, xi, w0, amp, formal=not real_xi), amp)
        for k, xi, w0, amp in itertools.product(PL_PREFACTORS, XI_VALUES, OMEGAS, PL_AMPLITUDES)
    ]


def shifted_orbits() -> list[ClosedFormOrbit]:
    """Shifted ML type-I orbits over lambda, branch, omega0 and (amplitude, shift) pairs."""
    return [
        build_orbit(
            OscillatorModel(
                profile=PdmProfile.shifted_ml(lam, shift, branch), family="type-c", dim=len(amp), omega0=w0
            ),
            amp,
            ORBIT_PHASE,
        )
        for lam, branch, w0, (amp, shift) in itertools.product(LAMBDAS, BRANCHES, OMEGAS, SHIFTED_SETS)
    ]


def _scaled_by_acceleration(raw: FloatArray, accel: FloatArray) -> FloatArray:
    result: FloatArray = raw / (1.0 + np.linalg.norm(accel, axis=-1, keepdims=True))
    return result


def _axis_map(spec: PerAxisMassSpec, shift: FloatArray, x: FloatArray) -> FloatArray:
    # q_i = sqrt(m_i) (x_i + xi_i)
    m, _ = spec.evaluate(x)
    result: FloatArray = np.sqrt(m) * (x + shift)
    return result


def _linearization_run(orbit: ClosedFormOrbit, periods: float) -> Trajectory:
    config = IntegratorConfig(method="rk4", dt=orbit.period / STEPS_PER_PERIOD, t_end=periods * orbit.period)
    return integrate(orbit.model, "el2-direct", evaluate_orbit(orbit, 0.0), config)


class VerificationService:
    """Service running the registered verification suite."""

    def __init__(
        self,
        tolerances: Mapping[str, float] | None = None,
        omega_factor: float = 1.0,
    ) -> None:
        """
        Initialize the verification service.

        Args:
            tolerances: Per-check tolerance overrides by check name.
            omega_factor: Multiplier applied to every orbit frequency before the
                residual checks; 1.0 leaves them exact.

        Raises:
            ConfigError: Unknown check name or non-positive tolerance.
        """
        overrides = dict(tolerances or {})
        unknown = sorted(set(overrides) - set(CHECKS_BY_NAME))
        if unknown:
            raise ConfigError(f"Unknown check name(s) in tolerance overrides: {', '.join(unknown)}")
        bad = [name for name, value in overrides.items() if not value > 0.0]
        if bad:
            raise ConfigError(f"Tolerances must be positive: {', '.join(bad)}")
        if not omega_factor > 0.0:
            raise ConfigError(f"omega factor must be positive, got {omega_factor}")
        self.tolerances = {check.name: overrides.get(check.name, check.tolerance) for check in CHECKS}
        self.omega_factor = omega_factor

    def select(self, family: str | None = None) -> list[RegisteredCheck]:
        """
        Checks covering a family, or every check when no family is given.

        Args:
            family: Orbit family name or "el1", case-insensitive.

        Returns:
            The selected checks in registration order.

        Raises:
            ConfigError: Unknown family.
        """
        if family is None:
            return list(CHECKS)
        key = family.lower()
        if key not in FILTER_FAMILIES:
            raise ConfigError(f"Unknown family '{family}'; expected one of {', '.join(sorted(FILTER_FAMILIES))}")
        return [check for check in CHECKS if key in check.families]

    def run(self, family: str | None = None) -> list[VerificationReport]:
        """
        Run the selected checks.

        A check that raises is recorded as a failed report carrying the error.

        Args:
            family: Optional family filter.

        Returns:
            One report per selected check.
        """
        reports: list[VerificationReport] = []
        for check in self.select(family):
            tolerance = self.tolerances[check.name]
            runner: Callable[[float], VerificationReport] = getattr(self, check.method)
            try:
                report = runner(tolerance)
            except PdmError as exc:
                report = VerificationReport.from_residuals(
                    check.name, [float("inf")], tolerance, notes=f"{type(exc).__name__}: {exc.detail}"
                )
            if not report.passed:
                logger.warning(f"Check {check.name} failed: max residual {report.max_residual:.3g} > {tolerance:g}")
            reports.append(report)

        passed = sum(report.passed for report in reports)
        logger.info(f"Verification: {passed}/{len(reports)} checks passed")
        return reports

    def _corrupted(self, orbit: ClosedFormOrbit) -> ClosedFormOrbit:
        if self.omega_factor == 1.0:
            return orbit
        return orbit.model_copy(update={"omega": orbit.omega * self.omega_factor})

    def _orbit_grid_report(
        self,
        name: str,
        orbits: list[ClosedFormOrbit],
        tolerance: float,
        forms: tuple[EomForm, ...] = ("el2-direct",),
    ) -> VerificationReport:
        chunks = [
            orbit_residuals(self._corrupted(orbit), form).ravel() for orbit in orbits for form in forms
        ]
        return VerificationReport.from_residuals(
            name,
            np.concatenate(chunks),
            tolerance,
            notes=f"{len(orbits)} orbits x {len(forms)} form(s) x 1000 samples",
        )

    # Closed-form residuals

    def _residual_ml1(self, tolerance: float) -> VerificationReport:
        return self._orbit_grid_report("residual-ml1", ml1_orbits(), tolerance, ML1_FORMS)

    def _residual_pl1(self, tolerance: float) -> VerificationReport:
        return self._orbit_grid_report("residual-pl1", pl1_orbits(), tolerance)

    def _residual_ml2(self, tolerance: float) -> VerificationReport:
        return self._orbit_grid_report("residual-ml2", ml2_orbits(), tolerance)

    def _residual_pl2(self, tolerance: float) -> VerificationReport:
        return self._orbit_grid_report("residual-pl2", pl2_orbits(), tolerance)

    def _residual_pl2_real_xi(self, tolerance: float) -> VerificationReport:
        return self._orbit_grid_report("residual-pl2-real-xi", pl2_orbits(real_xi=True), tolerance)

    def _residual_shifted(self, tolerance: float) -> VerificationReport:
        return self._orbit_grid_report("residual-shifted-ml1", shifted_orbits(), tolerance)

    def _residual_el1(self, tolerance: float) -> VerificationReport:
        # Each axis of an EL-I ML model is a one-dimensional ML oscillator with its own frequency
        chunks: list[FloatArray] = []
        count = 0
        for lam, branch, w0, amp in itertools.product(LAMBDAS, BRANCHES, OMEGAS, ML_AMPLITUDES):
            model = OscillatorModel(
                profile=PdmProfile.mathews_lakshmanan(lam, branch), family="type-a", dim=len(amp), omega0=w0
            )
            axis_model = model.model_copy(update={"dim": 1})
            axis_orbits = [self._corrupted(build_orbit(axis_model, (b,), ORBIT_PHASE)) for b in amp]
            times = np.linspace(0.0, 2.0 * max(orbit.period for orbit in axis_orbits), 1000)
            parts = [orbit_kinematics(orbit, times) for orbit in axis_orbits]
            x, v, a = (np.concatenate([p[i] for p in parts], axis=-1) for i in range(3))
            chunks.append(_scaled_by_acceleration(residuals(model, "el1", x, v, a), a).ravel())
            count += 1
        return VerificationReport.from_residuals(
            "residual-el1",
            np.concatenate(chunks),
            tolerance,
            notes=f"{count} EL-I models with per-axis frequencies, 1000 samples each",
        )

    def _pl2_sign_regime(self, tolerance: float) -> VerificationReport:
        return pl2_sign_regime_report(tolerance=tolerance, omega_factor=self.omega_factor)

    def _ml2_constraint(self, tolerance: float) -> VerificationReport:
        reports = [
            ml2_constraint_check(ml2_model(lam, branch, w0, (1.0, 0.5)), tolerance=tolerance)
            for lam, branch, w0 in itertools.product(LAMBDAS, BRANCHES, OMEGAS)
        ]
        violated = ml2_model(0.5, "plus", 1.0, (1.0, 0.5)).model_copy(update={"zeta_sq": 2.0})
        control = ml2_constraint_check(violated, tolerance=tolerance)
        return VerificationReport.from_residuals(
            "ml2-constraint",
            [report.max_residual for report in reports],
            tolerance,
            notes=(
                f"{len(reports)} models satisfying zeta^2 = -/+ 1/lambda; "
                f"violated constraint {'rejected' if not control.passed else 'NOT rejected'}"
            ),
        )

    # Invariance checks

    def _invariance_models(self) -> list[OscillatorModel]:
        return [
            OscillatorModel(profile=PdmProfile.mathews_lakshmanan(0.7, "plus"), family="type-a", dim=3),
            OscillatorModel(profile=PdmProfile.mathews_lakshmanan(0.7, "minus"), family="type-a", dim=3),
            OscillatorModel(profile=PdmProfile.power_law(1.5, 1.0), family="type-a", dim=2),
            OscillatorModel(profile=PdmProfile.power_law(0.8, -0.5), family="type-a", dim=3),
            ml2_model(0.5, "minus", 1.3, (1.0, 0.2, -0.4)),
            OscillatorModel(
                profile=PdmProfile.shifted_ml(0.4, (0.2, -0.1), "plus"), family="type-c", dim=2, omega0=0.8
            ),
        ]

    def _form_agreement(self, tolerance: float) -> VerificationReport:
        chunks: list[FloatArray] = []
        for seed, model in enumerate(self._invariance_models()):
            x, v = random_in_domain_states(model, RANDOM_STATES, seed, collinear=True)
            reference = accelerations(model, "el2-direct", x, v)
            for form in ML1_FORMS[1:]:
                chunks.append(_scaled_by_acceleration(accelerations(model, form, x, v) - reference, reference).ravel())
        return VerificationReport.from_residuals(
            "form-agreement",
            np.concatenate(chunks),
            tolerance,
            notes=f"{RANDOM_STATES} collinear states per model, forms {', '.join(ML1_FORMS)}",
        )

    def _newton_vector(self, tolerance: float) -> VerificationReport:
        chunks: list[FloatArray] = []
        for seed, model in enumerate(self._invariance_models()):
            x, v = random_in_domain_states(model, RANDOM_STATES, 100 + seed)
            accel = accelerations(model, "el2-direct", x, v)
            raw = newtonian_vector_residuals(model, x, v, accel)
            _, terms = model_terms(model, x)
            weight = model.m0 * np.abs(terms.m)[..., None]
            chunks.append(_scaled_by_acceleration(raw / weight, accel).ravel())
        return VerificationReport.from_residuals(
            "newton-vector",
            np.concatenate(chunks),
            tolerance,
            notes=f"el2-direct accelerations on {RANDOM_STATES} arbitrary states per model",
        )

    def _scale_factors(self, tolerance: float) -> VerificationReport:
        r = np.linspace(0.05, 1.2, 200)
        direction = np.asarray(_unit((1.0, -0.5, 0.3)))
        chunks: list[FloatArray] = []
        names: list[str] = []

        for lam, branch in itertools.product((0.5,), BRANCHES):
            model = OscillatorModel(profile=PdmProfile.mathews_lakshmanan(lam, branch), family="type-a", dim=3)
            m = radial_terms(model.profile, r).m
            chunks.append(self._scale_deviation(model, r[:, None] * direction, m, m**3))
            names.append(f"ml-{branch}")

        for ups in PL_EXPONENTS:
            k = 1.5
            model = OscillatorModel(profile=PdmProfile.power_law(k, ups), family="type-a", dim=3)
            m = k * r ** (2.0 * ups)
            f = np.full_like(r, 1.0 + ups)
            chunks.append(self._scale_deviation(model, r[:, None] * direction, f, m * f**2))
            names.append(f"pl{ups:g}")

        xi = 0.7
        for branch in BRANCHES:
            lam = 0.5
            model = ml2_model(lam, branch, 1.0, tuple(direction))
            model = model.model_copy(update={"zeta": tuple(xi * direction), "zeta_sq": None})
            m = radial_terms(model.profile, r).m
            sign = model.profile.sign
            f = -sign * lam * m * r * xi
            chunks.append(self._scale_deviation(model, r[:, None] * direction, f, m * f**2))
            names.append(f"ml2-{branch}")

        for ups in (-1.0, 1.0):
            k = 1.5
            model = OscillatorModel(
                profile=PdmProfile.power_law(k, ups), family="type-b", dim=3, zeta=tuple(xi * direction)
            )
            m = k * r ** (2.0 * ups)
            f = ups * xi / r
            chunks.append(self._scale_deviation(model, r[:, None] * direction, f, m * f**2))
            names.append(f"pl2-{ups:g}")

        shift = (0.2, -0.1, 0.05)
        model = OscillatorModel(profile=PdmProfile.shifted_ml(0.5, shift, "plus"), family="type-c", dim=3)
        m = radial_terms(model.profile, r).m
        chunks.append(self._scale_deviation(model, r[:, None] * direction - model.shift, m, m**3))
        names.append("shifted-ml")

        return VerificationReport.from_residuals(
            "scale-factors",
            np.concatenate(chunks),
            tolerance,
            notes=f"f and g against closed forms on 200 radii for {', '.join(names)}",
        )

    @staticmethod
    def _scale_deviation(model: OscillatorModel, x: FloatArray, f_exact: FloatArray, g_exact: FloatArray) -> FloatArray:
        f = np.asarray(time_scale_f(model, x))
        g = np.asarray(space_scale_g(model, x))
        f_dev = np.abs(f - f_exact) / np.maximum(1.0, np.abs(f_exact))
        g_dev = np.abs(g - g_exact) / np.maximum(1.0, np.abs(g_exact))
        result: FloatArray = np.concatenate([f_dev, g_dev])
        return result

    def _el1_decoupling(self, tolerance: float) -> VerificationReport:
        # Known value: m_1 = 1/(1 + x_1^2), unit mass on axis 2, SHO force; x = (1, 0), v = (1, 0) gives a_1 = -1.5
        spec = PerAxisMassSpec.mathews_lakshmanan((1.0, 0.0))

        def sho_gradient(x: FloatArray) -> FloatArray:
            return np.asarray(x, dtype=np.float64)

        unit_state = PhaseState.of(0.0, (1.0, 0.0), (1.0, 0.0))
        known = el1_acceleration(spec, sho_gradient, unit_state)
        chunks: list[FloatArray] = [
            np.abs(known - np.array([-1.5, 0.0])),
            np.abs(el1_residual(spec, sho_gradient, unit_state, known)),
        ]

        model = OscillatorModel(profile=PdmProfile.mathews_lakshmanan(0.6, "plus"), family="type-a", dim=3)
        x, v = random_in_domain_states(model, RANDOM_STATES, 11)
        rng = np.random.default_rng(12)
        base = accelerations(model, "el1", x, v)
        for axis in range(model.dim):
            others = [i for i in range(model.dim) if i != axis]
            order = rng.permutation(len(x))
            x2, v2 = x.copy(), v.copy()
            x2[:, others] = x[order][:, others]
            v2[:, others] = v[order][:, others]
            moved = accelerations(model, "el1", x2, v2)
            chunks.append(np.abs(moved[:, axis] - base[:, axis]) / (1.0 + np.abs(base[:, axis])))

        direct = np.array(
            [
                el1_acceleration(
                    PerAxisMassSpec.from_model(model), per_axis_potential_gradient(model), PhaseState.of(0.0, pos, vel)
                )
                for pos, vel in zip(x[:50], v[:50], strict=True)
            ]
        )
        chunks.append(_scaled_by_acceleration(direct - base[:50], base[:50]).ravel())
        return VerificationReport.from_residuals(
            "el1-decoupling",
            np.concatenate(chunks),
            tolerance,
            notes=(
                f"a_1 = {float(known[0]):.15g} for the unit example; "
                f"axes shuffled independently on {RANDOM_STATES} states"
            ),
        )

    def _el1_scale_factors(self, tolerance: float) -> VerificationReport:
        h = 1e-5
        chunks: list[FloatArray] = []
        for branch in BRANCHES:
            model = OscillatorModel(
                profile=PdmProfile.shifted_ml(0.5, (0.15, -0.1), branch), family="type-c", dim=2
            )
            spec = PerAxisMassSpec.from_model(model)
            grid = np.linspace(-1.0, 1.0, 201)
            x = np.stack([grid, grid[::-1]], axis=-1)
            y = x + model.shift

            slope = (_axis_map(spec, model.shift, x + h) - _axis_map(spec, model.shift, x - h)) / (2.0 * h)
            m, dm = spec.evaluate(x)
            f = 1.0 + y * dm / (2.0 * m)
            g = m * f**2
            chunks.append((np.abs(slope**2 - g) / np.maximum(1.0, g)).ravel())
        return VerificationReport.from_residuals(
            "el1-scale-factors",
            np.concatenate(chunks),
            tolerance,
            notes="(dq_i/dx_i)^2 by central differences (h = 1e-5) against m_i f_i^2",
        )

    def _energy_closed_form(self, tolerance: float) -> VerificationReport:
        theta = np.linspace(-1.2, 1.2, 25)
        chunks: list[FloatArray] = []
        families = (ml1_orbits(), pl1_orbits(), shifted_orbits(), ml2_orbits(), pl2_orbits())
        for orbit in itertools.chain.from_iterable(families):
            times = (theta - orbit.phase) / orbit.omega
            x, v, _ = orbit_kinematics(orbit, times)
            measured = np.asarray(energies(orbit.model, x, v))
            chunks.append(np.abs(measured - orbit.energy) / abs(orbit.energy))
        return VerificationReport.from_residuals(
            "energy-closed-form",
            np.concatenate(chunks),
            tolerance,
            notes=f"{sum(len(f) for f in families)} orbits (ml1, pl1, shifted-ml1, ml2, pl2), 25 samples each",
        )

    # Integration and linearization

    @cached_property
    def _ml1_benchmark(self) -> tuple[ClosedFormOrbit, Trajectory]:
        model = OscillatorModel(profile=PdmProfile.mathews_lakshmanan(1.0, "plus"), family="type-a", dim=3)
        orbit = build_orbit(model, (1.0, 0.5, 0.25))
        return orbit, _linearization_run(orbit, 10.0)

    @cached_property
    def _shifted_benchmark(self) -> tuple[ClosedFormOrbit, Trajectory]:
        model = OscillatorModel(profile=PdmProfile.shifted_ml(0.5, (0.2, -0.1), "plus"), family="type-c", dim=2)
        orbit = build_orbit(model, (0.6, 0.3))
        return orbit, _linearization_run(orbit, 5.0)

    def _integration_rk4(self, tolerance: float) -> VerificationReport:
        orbit, trajectory = self._ml1_benchmark
        return VerificationReport.from_residuals(
            "integration-rk4-ml1",
            [max_orbit_error(trajectory, orbit)],
            tolerance,
            notes=f"n=3, B=(1, 0.5, 0.25), lambda=1 plus, dt=T/{STEPS_PER_PERIOD}, 10 periods",
        )

    @cached_property
    def _ml1_adaptive_run(self) -> Trajectory:
        orbit, _ = self._ml1_benchmark
        config = IntegratorConfig(method="rk45", rel_tol=1e-10, abs_tol=1e-12, t_end=10.0 * orbit.period)
        return integrate(orbit.model, "el2-direct", evaluate_orbit(orbit, 0.0), config)

    def _integration_rk45(self, tolerance: float) -> VerificationReport:
        orbit, _ = self._ml1_benchmark
        trajectory = self._ml1_adaptive_run
        return VerificationReport.from_residuals(
            "integration-rk45-ml1",
            [max_orbit_error(trajectory, orbit)],
            tolerance,
            notes=f"rel_tol=1e-10, {len(trajectory)} accepted samples over 10 periods",
        )

    def _energy_drift(self, tolerance: float) -> VerificationReport:
        orbit, fixed = self._ml1_benchmark
        adaptive = self._ml1_adaptive_run
        drifts = (energy_drift(fixed), energy_drift(adaptive))
        initial = float(fixed.energy[0])
        return VerificationReport.from_residuals(
            "energy-drift-ml1",
            drifts,
            tolerance,
            notes=(
                f"rk4 drift {drifts[0]:.3g}, rk45 drift {drifts[1]:.3g}; "
                f"E(0) = {initial:.15g}, closed form 1/2 Omega^2 S = {orbit.energy:.15g}"
            ),
        )

    def _sho_residual_ml1(self, tolerance: float) -> VerificationReport:
        orbit, trajectory = self._ml1_benchmark
        report = sho_residual(build_reference(orbit.model, trajectory), orbit.model.omega0, tolerance)
        return report.model_copy(update={"check_name": "sho-residual-ml1"})

    def _cosine_fit_report(
        self, name: str, orbit: ClosedFormOrbit, trajectory: Trajectory, tolerance: float
    ) -> VerificationReport:
        fit = cosine_fit(build_reference(orbit.model, trajectory))
        return VerificationReport.from_residuals(
            name,
            [fit.relative_frequency_error(orbit.model.omega0)],
            tolerance,
            notes=(
                f"fitted omega {fit.frequency:.12g} vs omega0 {orbit.model.omega0:g}, "
                f"rms {fit.rms_error:.3g}, amplitudes {', '.join(f'{b:.6g}' for b in fit.amplitudes)}"
            ),
        )

    def _cosine_fit_ml1(self, tolerance: float) -> VerificationReport:
        orbit, trajectory = self._ml1_benchmark
        return self._cosine_fit_report("cosine-fit-ml1", orbit, trajectory, tolerance)

    def _f_consistency_ml1(self, tolerance: float) -> VerificationReport:
        orbit, trajectory = self._ml1_benchmark
        report = verify_f_consistency(orbit.model, trajectory, tolerance)
        return report.model_copy(update={"check_name": "f-consistency-ml1"})

    def _sho_residual_shifted(self, tolerance: float) -> VerificationReport:
        orbit, trajectory = self._shifted_benchmark
        report = sho_residual(build_reference(orbit.model, trajectory), orbit.model.omega0, tolerance)
        return report.model_copy(update={"check_name": "sho-residual-shifted-ml1"})

    def _cosine_fit_shifted(self, tolerance: float) -> VerificationReport:
        orbit, trajectory = self._shifted_benchmark
        return self._cosine_fit_report("cosine-fit-shifted-ml1", orbit, trajectory, tolerance)

    def _reference_energy_ml2(self, tolerance: float) -> VerificationReport:
        # Minus branch keeps zeta real, which the type-b map needs
        orbit = build_orbit(ml2_model(0.5, "minus", 1.0, (0.6, 0.3)), (0.6, 0.3))
        trajectory = _linearization_run(orbit, 2.0)
        report = reference_energy_report(build_reference(orbit.model, trajectory), orbit.model.omega0, tolerance)
        return report.model_copy(update={"check_name": "reference-energy-ml2"}).with_notes(
            "(tau is not monotone on this orbit)"
        )

    def _convergence_rk4(self, tolerance: float) -> VerificationReport:
        orbit, _ = self._ml1_benchmark
        study = convergence_order(orbit)
        return VerificationReport.from_residuals(
            "convergence-rk4",
            [abs(study.order - 4.0)],
            tolerance,
            notes=f"orders {', '.join(f'{p:.4f}' for p in study.orders)}; errors "
            + ", ".join(f"{e:.3g}" for e in study.errors),
        )

    # Frequency laws

    def _frequency_ml1(self, tolerance: float) -> VerificationReport:
        spec = SweepSpec(
            model=OscillatorModel(profile=PdmProfile.mathews_lakshmanan(0.0), family="type-a", dim=1),
            grid=SweepGrid(lam=[0.0, 0.5, 1.0]),
            amplitudes=(1.0,),
        )
        return self._frequency_report("frequency-ml1", spec, tolerance)

    def _frequency_pl1(self, tolerance: float) -> VerificationReport:
        spec = SweepSpec(
            model=OscillatorModel(profile=PdmProfile.power_law(1.0, 1.0), family="type-a", dim=1),
            grid=SweepGrid(upsilon=[1.0, 2.0]),
            amplitudes=(1.0,),
        )
        return self._frequency_report("frequency-pl1", spec, tolerance)

    @staticmethod
    def _frequency_report(name: str, spec: SweepSpec, tolerance: float) -> VerificationReport:
        rows = run_sweep(spec, jobs=1)
        errors = [row.relative_error if row.relative_error is not None else float("inf") for row in rows]
        measured = ", ".join(
            f"{row.omega_measured:.8g}" if row.omega_measured is not None else row.status for row in rows
        )
        return VerificationReport.from_residuals(
            name, errors, tolerance, notes=f"measured Omega {measured} over {len(rows)} grid points"
        )
