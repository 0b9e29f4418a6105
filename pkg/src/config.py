"""
Toolkit configuration using Pydantic Settings.

Loads configuration from environment variables with sensible defaults.
"""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # Application
    APP_NAME: str = "pdm-oscillators"
    APP_VERSION: str = "0.1.0"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Numerical guards
    COLLINEARITY_TOL: float = 1e-12
    GATE_TOL: float = 1e-10
    SINGULAR_MASS_TOL: float = 1e-14
    DOMAIN_MARGIN: float = 1e-12

    # Cosine fit
    FIT_MAX_ITERATIONS: int = 200

    # Adaptive step control
    ADAPTIVE_SAFETY: float = 0.9
    ADAPTIVE_MIN_FACTOR: float = 0.2
    ADAPTIVE_MAX_FACTOR: float = 5.0

    # Batch runs
    DEFAULT_JOBS: int = 4
    DEFAULT_OUTPUT_DIR: str = "out"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
