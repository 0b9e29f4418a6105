"""
verify: run the registered check suite and write the report.
"""

import argparse
import logging
from pathlib import Path

from src.cli.common import Subparsers, add_output_argument, add_tolerance_argument, parse_tolerances
from src.core.exceptions import EXIT_FAILURE, EXIT_OK
from src.repositories.report_repository import ReportRepository
from src.services.verification_service import FILTER_FAMILIES, VerificationService

logger = logging.getLogger(__name__)

REPORT_NAME = "report.json"


def register(subparsers: Subparsers) -> None:
    """Register the verify subcommand."""
    parser = subparsers.add_parser("verify", help="Run the verification suite")
    parser.add_argument(
        "--family",
        default=None,
        metavar="NAME",
        help=f"Only checks covering one family ({', '.join(sorted(FILTER_FAMILIES))})",
    )
    parser.add_argument(
        "--corrupt-omega",
        type=float,
        default=1.0,
        metavar="FACTOR",
        help="Multiply every orbit frequency before the residual checks",
    )
    add_tolerance_argument(parser)
    add_output_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    """
    Run the suite and write report.json.

    Returns:
        0 when every selected check passes, 1 otherwise.
    """
    service = VerificationService(parse_tolerances(args.tol), omega_factor=args.corrupt_omega)
    reports = service.run(args.family)
    path = ReportRepository(Path(args.out)).save_reports(REPORT_NAME, reports)

    failed = [report.check_name for report in reports if not report.passed]
    if failed:
        logger.error(f"{len(failed)} check(s) failed: {', '.join(failed)}")
    logger.info(f"Wrote {len(reports)} reports to {path}")
    return EXIT_FAILURE if failed else EXIT_OK
