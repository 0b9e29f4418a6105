"""Tests for the verification suite."""

import pytest

from src.core.exceptions import ConfigError
from src.services.integration_service import energy_drift
from src.services.verification_service import CHECKS, CHECKS_BY_NAME, VerificationService, ml1_orbits, pl2_orbits


class TestSelection:
    """Tests for check selection and configuration."""

    def test_all_checks(self) -> None:
        """Test no family selects every registered check."""
        assert VerificationService().select() == list(CHECKS)

    def test_family_filter(self) -> None:
        """Test a family selects only its checks, case-insensitively."""
        names = [check.name for check in VerificationService().select("PL2")]
        assert names == ["residual-pl2", "residual-pl2-real-xi", "pl2-sign-regime", "energy-closed-form"]

    def test_el1_filter(self) -> None:
        """Test the EL-I filter picks the per-axis checks."""
        names = {check.name for check in VerificationService().select("el1")}
        assert names == {"residual-el1", "el1-decoupling", "el1-scale-factors"}

    def test_unknown_family(self) -> None:
        """Test an unknown family is a configuration error."""
        with pytest.raises(ConfigError, match="Unknown family"):
            VerificationService().select("ml3")

    def test_unknown_tolerance_name(self) -> None:
        """Test overrides must name registered checks."""
        with pytest.raises(ConfigError, match="residual-ml9"):
            VerificationService({"residual-ml9": 1e-9})

    def test_non_positive_tolerance(self) -> None:
        """Test overrides must be positive."""
        with pytest.raises(ConfigError, match="positive"):
            VerificationService({"residual-ml1": 0.0})

    def test_override_applied(self) -> None:
        """Test an override replaces the default."""
        service = VerificationService({"residual-ml1": 1e-6})
        assert service.tolerances["residual-ml1"] == 1e-6
        assert service.tolerances["residual-pl1"] == 1e-9

    def test_non_positive_omega_factor(self) -> None:
        """Test the corruption factor must be positive."""
        with pytest.raises(ConfigError):
            VerificationService(omega_factor=-1.0)


class TestOrbitGrids:
    """Tests for the orbit parameter grids."""

    def test_ml1_grid_size(self) -> None:
        """Test every lambda, branch, omega0 and amplitude combination is built."""
        assert len(ml1_orbits()) == 3 * 2 * 3 * 3

    def test_pl2_regimes(self) -> None:
        """Test formal zeta gives cosines and real zeta gives cosh orbits."""
        assert {orbit.family for orbit in pl2_orbits()} == {"pl2"}
        assert {orbit.family for orbit in pl2_orbits(real_xi=True)} == {"pl2-real-xi"}


class TestRun:
    """Tests for running the suite."""

    def test_pl2_family_passes(self) -> None:
        """Test the power-law type-II checks pass at default tolerances."""
        reports = VerificationService().run("pl2")
        assert all(report.passed for report in reports), [r.to_record() for r in reports]
        regime = next(r for r in reports if r.check_name == "pl2-sign-regime")
        assert "valid regime" in regime.notes

    def test_ml2_family_passes(self) -> None:
        """Test the type-II reduction checks pass."""
        reports = VerificationService().run("ml2")
        assert all(report.passed for report in reports), [r.to_record() for r in reports]

    def test_el1_family_passes(self) -> None:
        """Test the EL-I checks pass."""
        reports = VerificationService().run("el1")
        assert all(report.passed for report in reports), [r.to_record() for r in reports]

    def test_corrupted_frequency_fails(self) -> None:
        """Test a 1% frequency error is caught by the residual check."""
        reports = VerificationService(omega_factor=1.01).run("pl2")
        residual = next(r for r in reports if r.check_name == "residual-pl2")
        assert not residual.passed
        assert residual.max_residual > 1e-4

    def test_loose_tolerance_passes_corruption(self) -> None:
        """Test overrides change the verdict."""
        service = VerificationService({"residual-pl2": 10.0}, omega_factor=1.01)
        residual = next(r for r in service.run("pl2") if r.check_name == "residual-pl2")
        assert residual.passed

    def test_energy_drift_covers_both_methods(self) -> None:
        """Test the ML1 drift check measures the RK4 and RK45 runs."""
        service = VerificationService()
        report = service._energy_drift(CHECKS_BY_NAME["energy-drift-ml1"].tolerance)
        assert "rk4 drift" in report.notes
        assert "rk45 drift" in report.notes
        assert report.passed, report.notes
        assert report.max_residual == max(energy_drift(service._ml1_benchmark[1]), energy_drift(service._ml1_adaptive_run))

    def test_el1_decoupling_passes(self) -> None:
        """Test the per-axis check passes with its known value and residual."""
        report = VerificationService()._el1_decoupling(CHECKS_BY_NAME["el1-decoupling"].tolerance)
        assert report.passed, report.notes
        assert "a_1 = -1.5" in report.notes

    @pytest.mark.slow
    def test_full_suite_passes(self) -> None:
        """Test every registered check passes at its default tolerance."""
        reports = VerificationService().run()
        assert len(reports) == len(CHECKS)
        failed = [r.to_record() for r in reports if not r.passed]
        assert failed == []
