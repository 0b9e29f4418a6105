"""Tests for settings and logging setup."""

import logging

import pytest

from src.config import Settings, get_settings
from src.core.logging import configure_logging


class TestSettings:
    """Tests for environment-driven settings."""

    def test_defaults(self) -> None:
        """Test the documented defaults."""
        settings = Settings()
        assert settings.APP_NAME == "pdm-oscillators"
        assert settings.GATE_TOL == 1e-10
        assert settings.DEFAULT_JOBS == 4

    def test_environment_override(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test environment variables override defaults."""
        monkeypatch.setenv("DEFAULT_JOBS", "2")
        monkeypatch.setenv("DOMAIN_MARGIN", "1e-9")
        settings = Settings()
        assert settings.DEFAULT_JOBS == 2
        assert settings.DOMAIN_MARGIN == 1e-9

    def test_cached(self) -> None:
        """Test the settings instance is shared."""
        assert get_settings() is get_settings()


class TestLogging:
    """Tests for log configuration."""

    def test_verbose_forces_debug(self) -> None:
        """Test --verbose sets the root logger to DEBUG."""
        configure_logging(verbose=True)
        assert logging.getLogger().level == logging.DEBUG

    def test_level_from_settings(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test LOG_LEVEL drives the root level."""
        monkeypatch.setattr("src.core.logging.settings.LOG_LEVEL", "warning")
        configure_logging()
        assert logging.getLogger().level == logging.WARNING
