"""Tests for the integrators and the integration service."""

import math

import numpy as np
import pytest

from src.core.exceptions import CollinearityError, ConfigError, DomainError, InsufficientCrossingsError, StepLimitError
from src.schemas.integrator import IntegratorConfig
from src.schemas.model import OscillatorModel, PdmProfile
from src.schemas.orbit import ClosedFormOrbit
from src.schemas.state import PhaseState
from src.services.closed_form_service import build_orbit, evaluate_orbit
from src.services.integration_service import (
    convergence_order,
    energy_drift,
    integrate,
    max_orbit_error,
    measure_branch_frequency,
    measure_period,
)
from src.services.integrators import DormandPrince45, RungeKutta4


def _decay(t: float, y: np.ndarray) -> np.ndarray:
    return -y


class TestIntegrators:
    """Tests for the Runge-Kutta steppers."""

    def test_rk4_single_step(self) -> None:
        """Test one RK4 step of y' = -y matches the degree-4 Taylor polynomial."""
        result = RungeKutta4(_decay).step(0.0, np.array([1.0]), 0.1)
        expected = 1 - 0.1 + 0.1**2 / 2 - 0.1**3 / 6 + 0.1**4 / 24
        assert result.y[0] == pytest.approx(expected, rel=1e-15)
        assert result.accepted

    def test_dormand_prince_accuracy(self) -> None:
        """Test an accepted adaptive step is accurate to its tolerance."""
        stepper = DormandPrince45(_decay, abs_tol=1e-12, rel_tol=1e-10)
        t, y, h = 0.0, np.array([1.0]), 0.05
        while t < 1.0:
            h = min(h, 1.0 - t)
            result = stepper.step(t, y, h)
            if result.accepted:
                t, y = t + h, result.y
            h = result.h
        assert y[0] == pytest.approx(math.exp(-1.0), rel=1e-8)

    def test_dormand_prince_rejects_large_step(self) -> None:
        """Test an oversized step is rejected and shrunk."""
        stepper = DormandPrince45(_decay, abs_tol=1e-14, rel_tol=1e-14)
        result = stepper.step(0.0, np.array([1.0]), 2.0)
        assert not result.accepted
        assert result.h < 2.0
        np.testing.assert_array_equal(result.y, [1.0])

    def test_initial_step_bounded(self) -> None:
        """Test the starting step never exceeds the span."""
        stepper = DormandPrince45(_decay)
        assert 0.0 < stepper.initial_step(0.0, np.array([1.0]), 1e-3) <= 1e-3


class TestIntegrate:
    """Tests for integrating the equations of motion."""

    def test_harmonic_oscillator(self, sho_model: OscillatorModel) -> None:
        """Test lambda = 0 reproduces cos(t) within RK4 error."""
        config = IntegratorConfig(method="rk4", dt=0.01, t_end=2 * math.pi)
        trajectory = integrate(sho_model, "el2-direct", PhaseState.of(0.0, [1.0, 0.0], [0.0, 0.5]), config)
        np.testing.assert_allclose(trajectory.x[:, 0], np.cos(trajectory.t), atol=1e-8)
        np.testing.assert_allclose(trajectory.x[:, 1], 0.5 * np.sin(trajectory.t), atol=1e-8)

    def test_first_and_last_samples(self, sho_model: OscillatorModel) -> None:
        """Test the record starts at the initial time and ends exactly at t_end."""
        config = IntegratorConfig(method="rk4", dt=0.03, t_end=1.0, record_every=7)
        trajectory = integrate(sho_model, "el2-direct", PhaseState.of(0.0, [1.0, 0.0], [0.0, 1.0]), config)
        assert trajectory.t[0] == 0.0
        assert trajectory.t[-1] == 1.0
        np.testing.assert_array_equal(trajectory.x[0], [1.0, 0.0])

    def test_record_every(self, sho_model: OscillatorModel) -> None:
        """Test every k-th step is recorded plus the first and last."""
        config = IntegratorConfig(method="rk4", dt=0.01, t_end=1.0, record_every=10)
        trajectory = integrate(sho_model, "el2-direct", PhaseState.of(0.0, [1.0, 0.0], [0.0, 1.0]), config)
        assert len(trajectory) == 11

    def test_tau_equals_t_for_constant_mass(self, sho_model: OscillatorModel) -> None:
        """Test f = 1 makes the re-scaled time the laboratory time."""
        config = IntegratorConfig(method="rk4", dt=0.01, t_end=3.0)
        trajectory = integrate(sho_model, "el2-direct", PhaseState.of(0.0, [1.0, 0.0], [0.0, 1.0]), config)
        np.testing.assert_allclose(trajectory.tau, trajectory.t, atol=1e-12)

    @pytest.mark.parametrize("method", ["rk4", "rk45"])
    def test_tau_starts_at_initial_time(self, sho_model: OscillatorModel, method: str) -> None:
        """Test a late start keeps tau equal to t, not t - t0."""
        config = IntegratorConfig.model_validate({"method": method, "dt": 0.01, "t_end": 3.0})
        trajectory = integrate(sho_model, "el2-direct", PhaseState.of(1.0, [1.0, 0.0], [0.0, 1.0]), config)
        assert trajectory.tau[0] == 1.0
        np.testing.assert_allclose(trajectory.tau, trajectory.t, atol=1e-12)

    def test_rk4_against_ml1(self, ml1_orbit: ClosedFormOrbit) -> None:
        """Test RK4 tracks the ML1 orbit and conserves its energy."""
        config = IntegratorConfig(method="rk4", dt=ml1_orbit.period / 2000, t_end=2 * ml1_orbit.period)
        trajectory = integrate(ml1_orbit.model, "el2-direct", evaluate_orbit(ml1_orbit, 0.0), config)
        assert max_orbit_error(trajectory, ml1_orbit) < 1e-6
        assert energy_drift(trajectory) < 1e-8

    def test_rk45_against_ml1(self, ml1_orbit: ClosedFormOrbit) -> None:
        """Test the adaptive integrator tracks the ML1 orbit."""
        config = IntegratorConfig(method="rk45", t_end=2 * ml1_orbit.period, abs_tol=1e-12, rel_tol=1e-10)
        trajectory = integrate(ml1_orbit.model, "el2-direct", evaluate_orbit(ml1_orbit, 0.0), config)
        assert trajectory.t[-1] == pytest.approx(2 * ml1_orbit.period, rel=1e-15)
        assert max_orbit_error(trajectory, ml1_orbit) < 1e-7

    def test_reduced_form_on_collinear_orbit(self, ml1_orbit: ClosedFormOrbit) -> None:
        """Test the radial form integrates a collinear orbit."""
        config = IntegratorConfig(method="rk4", dt=ml1_orbit.period / 1000, t_end=ml1_orbit.period)
        trajectory = integrate(ml1_orbit.model, "el2-radial", evaluate_orbit(ml1_orbit, 0.0), config)
        assert max_orbit_error(trajectory, ml1_orbit) < 1e-6

    def test_collinearity_gate(self, ml1_model: OscillatorModel) -> None:
        """Test reduced forms refuse crossing initial conditions."""
        config = IntegratorConfig(method="rk4", dt=0.01, t_end=1.0)
        with pytest.raises(CollinearityError):
            integrate(ml1_model, "el2-radial", PhaseState.of(0.0, [0.5, 0.0], [0.0, 1.0]), config)

    def test_empty_span(self, sho_model: OscillatorModel) -> None:
        """Test t_end must exceed the initial time."""
        config = IntegratorConfig(method="rk4", dt=0.01, t_end=1.0)
        with pytest.raises(ConfigError):
            integrate(sho_model, "el2-direct", PhaseState.of(1.0, [1.0, 0.0], [0.0, 0.0]), config)

    def test_dimension_mismatch(self, sho_model: OscillatorModel) -> None:
        """Test initial states must match the model dimension."""
        config = IntegratorConfig(method="rk4", dt=0.01, t_end=1.0)
        with pytest.raises(ConfigError):
            integrate(sho_model, "el2-direct", PhaseState.of(0.0, [1.0], [0.0]), config)

    def test_domain_exit_at_start(self, ml1_minus_model: OscillatorModel) -> None:
        """Test a start outside the domain raises with no partial samples."""
        config = IntegratorConfig(method="rk4", dt=0.01, t_end=1.0)
        with pytest.raises(DomainError) as exc_info:
            integrate(ml1_minus_model, "el2-direct", PhaseState.of(0.0, [1.5, 0.0], [0.0, 0.0]), config)
        assert exc_info.value.partial is None

    def test_step_limit(self, sho_model: OscillatorModel) -> None:
        """Test the step budget keeps the initial sample as partial output."""
        config = IntegratorConfig(method="rk4", dt=0.01, t_end=1.0, max_steps=10)
        with pytest.raises(StepLimitError) as exc_info:
            integrate(sho_model, "el2-direct", PhaseState.of(0.0, [1.0, 0.0], [0.0, 1.0]), config)
        assert exc_info.value.partial is not None
        assert len(exc_info.value.partial) == 1

    def test_rk4_needs_dt(self) -> None:
        """Test the fixed-step method requires dt."""
        with pytest.raises(ValueError):
            IntegratorConfig(method="rk4", t_end=1.0)


class TestMeasurements:
    """Tests for period, frequency and convergence measurements."""

    def test_period_of_harmonic_oscillator(self, sho_model: OscillatorModel) -> None:
        """Test the crossing-based period of cos(t)."""
        config = IntegratorConfig(method="rk4", dt=0.001, t_end=20.0)
        trajectory = integrate(sho_model, "el2-direct", PhaseState.of(0.0, [1.0, 0.0], [0.0, 0.0]), config)
        assert measure_period(trajectory, 0) == pytest.approx(2 * math.pi, rel=1e-6)

    def test_period_needs_crossings(self, sho_model: OscillatorModel) -> None:
        """Test short runs cannot be measured."""
        config = IntegratorConfig(method="rk4", dt=0.01, t_end=0.5)
        trajectory = integrate(sho_model, "el2-direct", PhaseState.of(0.0, [1.0, 0.0], [0.0, 0.0]), config)
        with pytest.raises(InsufficientCrossingsError):
            measure_period(trajectory, 0)

    def test_branch_frequency(self) -> None:
        """Test the linearizing variable recovers Omega = (1 + upsilon) w0."""
        model = OscillatorModel(profile=PdmProfile.power_law(1.0, 1.0), family="type-a", dim=2)
        orbit = build_orbit(model, (0.6, 0.8), 0.3)
        t_end = 0.9 * (0.5 * math.pi - 0.3) / orbit.omega
        config = IntegratorConfig(method="rk4", dt=orbit.period / 4000, t_end=t_end)
        trajectory = integrate(model, "el2-direct", evaluate_orbit(orbit, 0.0), config)
        assert measure_branch_frequency(trajectory, (0.6, 0.8), 1.0) == pytest.approx(2.0, rel=1e-4)

    def test_convergence_order(self, ml1_orbit: ClosedFormOrbit) -> None:
        """Test RK4 halves its error sixteen-fold per halving."""
        study = convergence_order(ml1_orbit)
        assert len(study.orders) == 3
        assert study.order == pytest.approx(4.0, abs=0.3)
        assert study.errors[0] > study.errors[-1]
