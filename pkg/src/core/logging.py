"""
Logging setup for the command-line entry point.
"""

import logging

from src.config import settings


def configure_logging(verbose: bool = False) -> None:
    """
    Configure the root logger once from settings.

    Args:
        verbose: Force DEBUG regardless of LOG_LEVEL.
    """
    level = logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(level=level, format=settings.LOG_FORMAT, force=True)
