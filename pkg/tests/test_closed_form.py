"""Tests for closed-form orbits and their oracles."""

import math

import numpy as np
import pytest

from src.core.exceptions import BranchDomainError, ConstraintError
from src.schemas.model import EomForm, OscillatorModel, PdmProfile
from src.schemas.orbit import ClosedFormOrbit
from src.services.closed_form_service import (
    build_orbit,
    evaluate_orbit,
    infer_family,
    ml2_constraint_check,
    orbit_kinematics,
    orbit_residuals,
    pl2_sign_regime_report,
)
from src.services.dynamics_service import energies


def _pl2_model(zeta_sq: float) -> OscillatorModel:
    return OscillatorModel(
        profile=PdmProfile.power_law(1.0, -1.0), family="type-b", dim=2, zeta=(0.64, 0.48), zeta_sq=zeta_sq
    )


class TestBuildOrbit:
    """Tests for orbit construction."""

    def test_ml1_frequency(self, ml1_orbit: ClosedFormOrbit) -> None:
        """Test Omega^2 = w0^2 / (1 + lambda sum B^2)."""
        assert ml1_orbit.family == "ml1"
        assert ml1_orbit.omega**2 == pytest.approx(1.0 / 1.225, rel=1e-15)
        assert ml1_orbit.period == pytest.approx(2 * math.pi * math.sqrt(1.225), rel=1e-15)

    def test_ml1_minus_frequency(self, ml1_minus_model: OscillatorModel) -> None:
        """Test Omega^2 = w0^2 / (1 - lambda sum B^2)."""
        orbit = build_orbit(ml1_minus_model, (0.6, 0.0))
        assert orbit.omega**2 == pytest.approx(1.0 / 0.64, rel=1e-15)

    def test_minus_branch_at_singular_radius(self, ml1_minus_model: OscillatorModel) -> None:
        """Test amplitudes reaching 1/sqrt(lambda) are refused."""
        with pytest.raises(ConstraintError):
            build_orbit(ml1_minus_model, (0.8, 0.6))

    def test_pl1_frequency(self) -> None:
        """Test Omega = (1 + upsilon) w0."""
        model = OscillatorModel(profile=PdmProfile.power_law(1.0, 2.0), family="type-a", dim=1, omega0=0.5)
        assert build_orbit(model, (1.0,)).omega == pytest.approx(1.5, rel=1e-15)

    @pytest.mark.parametrize("upsilon", [0.0, -1.0])
    def test_pl1_excluded_exponents(self, upsilon: float) -> None:
        """Test upsilon in {0, -1} has no pl1 orbit."""
        model = OscillatorModel(profile=PdmProfile.power_law(1.0, upsilon), family="type-a", dim=1)
        with pytest.raises(ConstraintError):
            build_orbit(model, (1.0,))

    def test_amplitude_count(self, ml1_model: OscillatorModel) -> None:
        """Test one amplitude per axis is required."""
        with pytest.raises(ConstraintError):
            build_orbit(ml1_model, (1.0,))

    def test_zero_amplitudes(self, ml1_model: OscillatorModel) -> None:
        """Test the trivial orbit is refused."""
        with pytest.raises(ConstraintError):
            build_orbit(ml1_model, (0.0, 0.0))

    def test_wrong_family(self, ml1_model: OscillatorModel) -> None:
        """Test a family that does not match the model is refused."""
        with pytest.raises(ConstraintError):
            build_orbit(ml1_model, (0.5, 0.5), family="pl1")

    def test_ml2_needs_reduction(self, ml2_model: OscillatorModel) -> None:
        """Test ML2 orbits require zeta^2 = -1/lambda."""
        assert build_orbit(ml2_model, (0.6, 0.3)).family == "ml2"
        with pytest.raises(ConstraintError):
            build_orbit(ml2_model.model_copy(update={"zeta_sq": 2.0}), (0.6, 0.3))

    def test_pl2_needs_formal_zeta(self) -> None:
        """Test the cosine PL2 orbit only exists with formal zeta^2 < 0."""
        orbit = build_orbit(_pl2_model(-0.64), (1.0, 0.5))
        assert orbit.omega**2 == pytest.approx(0.64 / 1.25, rel=1e-14)
        assert orbit.energy == pytest.approx(-0.5 * orbit.omega**2, rel=1e-14)
        with pytest.raises(ConstraintError):
            build_orbit(_pl2_model(0.64), (1.0, 0.5), family="pl2")

    def test_infer_family(self, ml1_model: OscillatorModel, ml2_model: OscillatorModel, shifted_model: OscillatorModel) -> None:
        """Test the orbit family follows from profile and substitution family."""
        assert infer_family(ml1_model) == "ml1"
        assert infer_family(ml2_model) == "ml2"
        assert infer_family(shifted_model) == "shifted-ml1"
        assert infer_family(_pl2_model(-1.0)) == "pl2"
        assert infer_family(_pl2_model(1.0)) == "pl2-real-xi"


class TestKinematics:
    """Tests for analytic orbit evaluation."""

    def test_ml1_start(self, ml1_orbit: ClosedFormOrbit) -> None:
        """Test x(0) = B cos(phi) and v(0) = -B Omega sin(phi)."""
        state = evaluate_orbit(ml1_orbit, 0.0)
        np.testing.assert_allclose(state.x, np.array([0.6, 0.3]) * math.cos(0.3))
        np.testing.assert_allclose(state.v, -np.array([0.6, 0.3]) * ml1_orbit.omega * math.sin(0.3))

    def test_shifted_offset(self, shifted_model: OscillatorModel) -> None:
        """Test shifted orbits oscillate around -xi."""
        orbit = build_orbit(shifted_model, (0.6, 0.3), math.pi / 2)
        np.testing.assert_allclose(evaluate_orbit(orbit, 0.0).x, [-0.2, 0.1], atol=1e-15)

    def test_pl1_branch_window(self) -> None:
        """Test pl1 refuses times where the base cosine is not positive."""
        model = OscillatorModel(profile=PdmProfile.power_law(1.0, 1.0), family="type-a", dim=1)
        orbit = build_orbit(model, (1.0,))
        x, _, _ = orbit_kinematics(orbit, 0.2)
        assert x[0] == pytest.approx(math.sqrt(math.cos(0.4)), rel=1e-15)
        with pytest.raises(BranchDomainError):
            evaluate_orbit(orbit, 0.6 * math.pi / orbit.omega)

    def test_cosh_orbit(self) -> None:
        """Test the real-xi companion is a growing cosh."""
        orbit = build_orbit(_pl2_model(0.64), (1.0, 0.5))
        assert orbit.family == "pl2-real-xi"
        assert math.isinf(orbit.period)
        x, _, _ = orbit_kinematics(orbit, 1.0 / orbit.omega)
        np.testing.assert_allclose(x, np.array([1.0, 0.5]) * math.cosh(1.0))


class TestResiduals:
    """Tests for closed forms substituted into the equations of motion."""

    @pytest.mark.parametrize("form", ["el2-direct", "el2-mdot", "el2-radial", "newton-full", "newton-parallel"])
    def test_ml1_every_form(self, ml1_orbit: ClosedFormOrbit, form: EomForm) -> None:
        """Test the ML1 orbit solves every EL2 form."""
        assert np.max(np.abs(orbit_residuals(ml1_orbit, form))) < 1e-9

    @pytest.mark.parametrize(
        ("profile", "amplitudes"),
        [
            (PdmProfile.mathews_lakshmanan(1.0, "minus"), (0.5, 0.4, 0.2)),
            (PdmProfile.power_law(2.0, -0.5), (0.6, 0.8)),
            (PdmProfile.power_law(0.5, 2.0), (1.0,)),
        ],
    )
    def test_type_one_orbits(self, profile: PdmProfile, amplitudes: tuple[float, ...]) -> None:
        """Test ML1 and PL1 orbits solve the direct equation."""
        model = OscillatorModel(profile=profile, family="type-a", dim=len(amplitudes), omega0=1.3)
        orbit = build_orbit(model, amplitudes, 0.3)
        assert np.max(np.abs(orbit_residuals(orbit))) < 1e-9

    def test_ml2(self, ml2_model: OscillatorModel) -> None:
        """Test the ML2 orbit solves the type-b equation on the reduction."""
        assert np.max(np.abs(orbit_residuals(build_orbit(ml2_model, (0.6, 0.3), 0.3)))) < 1e-9

    def test_pl2_and_cosh(self) -> None:
        """Test both power-law type-II orbits solve their equations."""
        for zeta_sq in (-0.64, 0.64):
            orbit = build_orbit(_pl2_model(zeta_sq), (1.0, 0.5))
            assert np.max(np.abs(orbit_residuals(orbit))) < 1e-9

    def test_shifted(self, shifted_model: OscillatorModel) -> None:
        """Test the shifted orbit solves the type-c equation."""
        assert np.max(np.abs(orbit_residuals(build_orbit(shifted_model, (0.6, 0.3), 0.3)))) < 1e-9

    def test_corrupted_frequency_fails(self, ml1_orbit: ClosedFormOrbit) -> None:
        """Test a one-percent frequency error leaves a visible residual."""
        corrupted = ml1_orbit.model_copy(update={"omega": ml1_orbit.omega * 1.01})
        assert np.max(np.abs(orbit_residuals(corrupted))) > 1e-4


class TestEnergy:
    """Tests for closed-form energies."""

    @pytest.mark.parametrize("t", [0.0, 1.7, 4.2])
    def test_ml1(self, ml1_orbit: ClosedFormOrbit, t: float) -> None:
        """Test E = 1/2 m0 Omega^2 sum B^2 along the orbit."""
        x, v, _ = orbit_kinematics(ml1_orbit, t)
        assert energies(ml1_orbit.model, x, v) == pytest.approx(ml1_orbit.energy, rel=1e-10)

    def test_ml2(self, ml2_model: OscillatorModel) -> None:
        """Test E = 1/2 m0 Omega^2 zeta^2."""
        orbit = build_orbit(ml2_model, (0.6, 0.3), 0.3)
        assert orbit.energy == pytest.approx(0.5 * orbit.omega**2 * -2.0, rel=1e-15)
        x, v, _ = orbit_kinematics(orbit, 0.9)
        assert energies(ml2_model, x, v) == pytest.approx(orbit.energy, rel=1e-10)

    def test_pl1(self) -> None:
        """Test E = 1/2 m0 w0^2 k S^(upsilon + 1)."""
        model = OscillatorModel(profile=PdmProfile.power_law(2.0, 1.0), family="type-a", dim=2)
        orbit = build_orbit(model, (0.6, 0.8), 0.3)
        assert orbit.energy == pytest.approx(1.0, rel=1e-15)
        x, v, _ = orbit_kinematics(orbit, 0.1)
        assert energies(model, x, v) == pytest.approx(1.0, rel=1e-10)


class TestOracles:
    """Tests for the constraint and sign-regime oracles."""

    def test_ml2_constraint_holds(self, ml2_model: OscillatorModel) -> None:
        """Test type-II and type-I accelerations agree on the reduction."""
        report = ml2_constraint_check(ml2_model)
        assert report.passed
        assert "constraint satisfied" in report.notes

    def test_ml2_constraint_violated(self, ml2_model: OscillatorModel) -> None:
        """Test a violated constraint is reported, not raised."""
        report = ml2_constraint_check(ml2_model.model_copy(update={"zeta_sq": 2.0}))
        assert not report.passed
        assert "constraint violated" in report.notes

    def test_ml2_constraint_wrong_model(self, ml1_model: OscillatorModel) -> None:
        """Test the check only applies to type-b ML models."""
        assert not ml2_constraint_check(ml1_model).passed

    def test_pl2_sign_regime(self) -> None:
        """Test the finding: lambda sum B^2 > 0 oscillates, real xi gives cosh."""
        report = pl2_sign_regime_report()
        assert report.passed
        assert "valid regime: lambda*sum(B^2) > 0" in report.notes
        assert "incompatible with real oscillation" in report.notes
        assert "cosh" in report.notes

    def test_pl2_sign_regime_corrupted(self) -> None:
        """Test the sign-regime check reacts to a wrong frequency."""
        assert not pl2_sign_regime_report(omega_factor=1.01).passed
