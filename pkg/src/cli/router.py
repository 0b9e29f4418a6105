"""
Main command-line router.

Combines all subcommands under a single parser.
"""

import argparse

from src.cli import linearize, simulate, sweep, verify
from src.cli.common import CliParser
from src.config import settings


def build_parser() -> argparse.ArgumentParser:
    """
    Build the top-level parser with every subcommand registered.

    Returns:
        The parser; parsed arguments carry the subcommand handler as `handler`.
    """
    parser = CliParser(
        prog="pdm-osc",
        description="Simulate and verify position-dependent-mass nonlinear oscillators",
    )
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {settings.APP_VERSION}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")

    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    # Register all subcommands
    simulate.register(subparsers)
    verify.register(subparsers)
    linearize.register(subparsers)
    sweep.register(subparsers)
    return parser
