"""
Arguments and helpers shared by the subcommands.
"""

import argparse
from collections.abc import Sequence
from typing import NoReturn, TypeAlias

from src.config import settings
from src.core.exceptions import ConfigError

Subparsers: TypeAlias = "argparse._SubParsersAction[argparse.ArgumentParser]"


class CliParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as ConfigError."""

    def error(self, message: str) -> NoReturn:
        raise ConfigError(f"{self.prog}: {message}")


def add_scenario_argument(parser: argparse.ArgumentParser, what: str = "scenario") -> None:
    """Add the required --scenario PATH option."""
    parser.add_argument("--scenario", required=True, metavar="PATH", help=f"JSON {what} file")


def add_output_argument(parser: argparse.ArgumentParser) -> None:
    """Add the --out DIR option."""
    parser.add_argument(
        "--out",
        default=settings.DEFAULT_OUTPUT_DIR,
        metavar="DIR",
        help=f"Output directory (default: {settings.DEFAULT_OUTPUT_DIR})",
    )


def add_tolerance_argument(parser: argparse.ArgumentParser) -> None:
    """Add the repeatable --tol NAME=VALUE option."""
    parser.add_argument(
        "--tol",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="Override one check tolerance; repeatable",
    )


def parse_tolerances(items: Sequence[str]) -> dict[str, float]:
    """
    Parse NAME=VALUE tolerance overrides.

    Args:
        items: Raw option values.

    Returns:
        Tolerances by check name.

    Raises:
        ConfigError: Malformed item, non-numeric or non-positive value.
    """
    tolerances: dict[str, float] = {}
    for item in items:
        name, sep, raw = item.partition("=")
        if not sep or not name.strip():
            raise ConfigError(f"--tol expects NAME=VALUE, got '{item}'")
        try:
            value = float(raw)
        except ValueError as exc:
            raise ConfigError(f"--tol {name}: '{raw}' is not a number") from exc
        if not value > 0.0:
            raise ConfigError(f"--tol {name}: tolerance must be positive")
        tolerances[name.strip()] = value
    return tolerances
