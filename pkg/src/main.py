"""
PDM Oscillators - command-line entry point.

Simulation and verification toolkit for position-dependent-mass nonlinear
oscillators.
"""

import logging
import sys
from collections.abc import Sequence

from src.cli import build_parser
from src.core.exceptions import PdmError
from src.core.logging import configure_logging

logger = logging.getLogger(__name__)


def main(argv: Sequence[str] | None = None) -> int:
    """
    Parse arguments, run the chosen subcommand and map errors to exit codes.

    Args:
        argv: Arguments without the program name; sys.argv when omitted.

    Returns:
        Process exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.verbose)
        code: int = args.handler(args)
    except PdmError as exc:
        logger.error(f"{type(exc).__name__}: {exc.detail}")
        return exc.exit_code
    return code


if __name__ == "__main__":
    sys.exit(main())
