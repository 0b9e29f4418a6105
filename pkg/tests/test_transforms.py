"""Tests for the linearizing transformation and its checks."""

import math

import numpy as np
import pytest

from src.core.exceptions import FitDivergedError, NonMonotoneTauError, ValidityError
from src.schemas.integrator import IntegratorConfig
from src.schemas.model import OscillatorModel, PdmProfile
from src.schemas.orbit import ClosedFormOrbit
from src.schemas.state import PhaseState, ReferenceTrajectory, Trajectory
from src.services.closed_form_service import build_orbit, evaluate_orbit
from src.services.integration_service import integrate
from src.services.profile_service import mass
from src.services.transforms_service import (
    accumulate_tau,
    build_reference,
    cosine_fit,
    map_point,
    reference_energy_report,
    sho_residual,
    verify_f_consistency,
)


@pytest.fixture
def ml1_run(ml1_orbit: ClosedFormOrbit) -> Trajectory:
    """Ten periods of the ML1 orbit at 2000 steps per period."""
    config = IntegratorConfig(method="rk4", dt=ml1_orbit.period / 2000, t_end=10 * ml1_orbit.period)
    return integrate(ml1_orbit.model, "el2-direct", evaluate_orbit(ml1_orbit, 0.0), config)


class TestMapPoint:
    """Tests for the point map to reference coordinates."""

    def test_type_a(self, ml1_model: OscillatorModel) -> None:
        """Test q = sqrt(m) r and qt = sqrt(m) v."""
        state = PhaseState.of(0.0, [0.3, 0.4], [1.0, -1.0])
        q, qt = map_point(ml1_model, state)
        root_m = math.sqrt(1.0 / 1.125)
        np.testing.assert_allclose(q, root_m * np.array([0.3, 0.4]), rtol=1e-15)
        np.testing.assert_allclose(qt, root_m * np.array([1.0, -1.0]), rtol=1e-15)

    def test_unit_lambda_known_value(self) -> None:
        """Test q = (1/sqrt(2), 0) for lambda = 1 at x = (1, 0)."""
        model = OscillatorModel(profile=PdmProfile.mathews_lakshmanan(1.0), family="type-a", dim=2)
        q, _ = map_point(model, PhaseState.of(0.0, [1.0, 0.0], [0.0, 0.0]))
        np.testing.assert_allclose(q, [1.0 / math.sqrt(2.0), 0.0], rtol=1e-15)

    def test_type_c_uses_anchor(self, shifted_model: OscillatorModel) -> None:
        """Test q = sqrt(m(y)) y for the shifted family."""
        state = PhaseState.of(0.0, [0.1, 0.5], [0.0, 0.0])
        q, _ = map_point(shifted_model, state)
        y = np.array([0.3, 0.4])
        np.testing.assert_allclose(q, math.sqrt(1.0 / 1.125) * y, rtol=1e-14)

    def test_type_b_collinear(self) -> None:
        """Test q = sqrt(m) zeta for collinear type-b states."""
        model = OscillatorModel(profile=PdmProfile.power_law(1.0, 1.0), family="type-b", dim=2, zeta=(0.6, 0.8))
        state = PhaseState.of(0.0, [0.3, 0.4], [0.6, 0.8])
        q, _ = map_point(model, state)
        np.testing.assert_allclose(q, math.sqrt(mass(model.profile, state.x)) * np.array([0.6, 0.8]), rtol=1e-15)

    def test_type_b_gate(self) -> None:
        """Test type-b states off the zeta line are refused."""
        model = OscillatorModel(profile=PdmProfile.power_law(1.0, 1.0), family="type-b", dim=2, zeta=(0.6, 0.8))
        with pytest.raises(ValidityError):
            map_point(model, PhaseState.of(0.0, [0.4, 0.3], [0.6, 0.8]))

    def test_type_b_formal_zeta(self, ml2_model: OscillatorModel) -> None:
        """Test a formal zeta has no real reference coordinate."""
        with pytest.raises(ValidityError):
            map_point(ml2_model, PhaseState.of(0.0, [0.5, 0.0], [1.0, 0.0]))


class TestReferenceTrajectory:
    """Tests for the mapped ML1 motion."""

    def test_tau_quadrature(self, ml1_run: Trajectory) -> None:
        """Test the integrated tau agrees with quadrature of f."""
        np.testing.assert_allclose(accumulate_tau(ml1_run.model, ml1_run), ml1_run.tau, atol=1e-9)

    def test_sho_residual(self, ml1_run: Trajectory) -> None:
        """Test d(qt)/d(tau) + w0^2 q = 0 along the mapped orbit."""
        report = sho_residual(build_reference(ml1_run.model, ml1_run), 1.0)
        assert report.check_name == "sho-residual"
        assert report.passed

    def test_cosine_fit(self, ml1_run: Trajectory, ml1_orbit: ClosedFormOrbit) -> None:
        """Test the mapped motion oscillates at w0, not at Omega."""
        fit = cosine_fit(build_reference(ml1_run.model, ml1_run))
        assert fit.relative_frequency_error(1.0) < 1e-6
        assert abs(fit.frequency - ml1_orbit.omega) > 0.05
        assert fit.amplitudes[0] > 0.0

    def test_reference_energy(self, ml1_run: Trajectory) -> None:
        """Test the reference oscillator energy is conserved."""
        assert reference_energy_report(build_reference(ml1_run.model, ml1_run), 1.0).passed

    def test_f_consistency(self, ml1_run: Trajectory) -> None:
        """Test dq/dt = sqrt(m) f v along the trajectory."""
        assert verify_f_consistency(ml1_run.model, ml1_run).passed

    def test_wrong_frequency_fails(self, ml1_run: Trajectory) -> None:
        """Test the residual check rejects the PDM frequency as reference."""
        reference = build_reference(ml1_run.model, ml1_run)
        assert not sho_residual(reference, 1.2).passed


class TestChecks:
    """Tests for the residual and fit edge cases."""

    def test_too_few_samples(self) -> None:
        """Test the residual needs five samples."""
        reference = ReferenceTrajectory(tau=np.arange(4.0), q=np.zeros((4, 1)), qtilde=np.zeros((4, 1)))
        with pytest.raises(ValueError):
            sho_residual(reference, 1.0)

    def test_non_monotone_tau(self) -> None:
        """Test tau must not change direction."""
        tau = np.array([0.0, 1.0, 2.0, 1.5, 3.0])
        reference = ReferenceTrajectory(tau=tau, q=np.cos(tau)[:, None], qtilde=-np.sin(tau)[:, None])
        with pytest.raises(NonMonotoneTauError):
            sho_residual(reference, 1.0)

    def test_fit_synthetic_cosine(self) -> None:
        """Test the fit recovers frequency, phase and amplitudes."""
        tau = np.linspace(0.0, 20.0, 2001)
        wave = np.cos(1.3 * tau + 0.4)
        reference = ReferenceTrajectory(
            tau=tau, q=np.column_stack((0.7 * wave, -0.2 * wave)), qtilde=np.zeros((tau.size, 2))
        )
        fit = cosine_fit(reference)
        assert fit.frequency == pytest.approx(1.3, rel=1e-10)
        assert fit.phase == pytest.approx(0.4, abs=1e-9)
        assert fit.amplitudes == pytest.approx((0.7, -0.2), rel=1e-9)
        assert fit.rms_error < 1e-10

    def test_fit_zero_signal(self) -> None:
        """Test identically zero data has no frequency."""
        reference = ReferenceTrajectory(tau=np.linspace(0.0, 1.0, 10), q=np.zeros((10, 1)), qtilde=np.zeros((10, 1)))
        with pytest.raises(FitDivergedError):
            cosine_fit(reference)

    def test_reference_energy_non_monotone(self) -> None:
        """Test the energy check works whatever tau does."""
        tau = np.array([0.0, 1.0, 0.5, 2.0, 1.0])
        reference = ReferenceTrajectory(tau=tau, q=np.cos(tau)[:, None], qtilde=-np.sin(tau)[:, None])
        assert reference_energy_report(reference, 1.0).passed

    def test_constant_mass_tau(self, sho_model: OscillatorModel) -> None:
        """Test f = 1 gives tau = t."""
        orbit = build_orbit(sho_model, (1.0, 0.5))
        config = IntegratorConfig(method="rk4", dt=0.01, t_end=5.0)
        trajectory = integrate(sho_model, "el2-direct", evaluate_orbit(orbit, 0.0), config)
        np.testing.assert_allclose(accumulate_tau(sho_model, trajectory), trajectory.t, atol=1e-12)

    def test_late_start_tau(self, sho_model: OscillatorModel) -> None:
        """Test the reference time of a run starting at t = 2 is the laboratory time."""
        config = IntegratorConfig(method="rk4", dt=0.01, t_end=5.0)
        trajectory = integrate(sho_model, "el2-direct", PhaseState.of(2.0, [1.0, 0.5], [0.0, 0.0]), config)
        np.testing.assert_allclose(accumulate_tau(sho_model, trajectory), trajectory.t, atol=1e-12)
        np.testing.assert_allclose(build_reference(sho_model, trajectory).tau, trajectory.t, atol=1e-12)
