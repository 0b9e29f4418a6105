"""
sweep: run a parameter grid and tabulate measured frequencies and energies.
"""

import argparse
import logging
from collections import Counter
from pathlib import Path

from src.cli.common import Subparsers, add_output_argument, add_scenario_argument
from src.config import settings
from src.core.exceptions import EXIT_FAILURE, EXIT_OK
from src.repositories.report_repository import ReportRepository
from src.services.scenario_service import load_sweep_spec
from src.services.sweep_service import run_sweep

logger = logging.getLogger(__name__)

TABLE_NAME = "sweep.csv"
SUMMARY_NAME = "sweep_summary.json"


def register(subparsers: Subparsers) -> None:
    """Register the sweep subcommand."""
    parser = subparsers.add_parser("sweep", help="Run a parameter grid and write the sweep table")
    add_scenario_argument(parser, what="sweep specification")
    add_output_argument(parser)
    parser.add_argument(
        "--jobs",
        type=int,
        default=settings.DEFAULT_JOBS,
        metavar="N",
        help=f"Worker processes (default: {settings.DEFAULT_JOBS})",
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    """
    Run every grid point and write sweep.csv plus a status summary.

    Domain exits and constraint violations are recorded per point.

    Returns:
        0 unless some point aborted, 1 otherwise.
    """
    spec = load_sweep_spec(args.scenario)
    rows = run_sweep(spec, jobs=args.jobs)
    reports = ReportRepository(Path(args.out))
    path = reports.save_sweep(TABLE_NAME, rows)

    statuses = Counter(row.status for row in rows)
    reports.save_summary(
        SUMMARY_NAME,
        {
            "points": len(rows),
            "statuses": dict(sorted(statuses.items())),
            "rows": [{"index": row.index, "status": row.status, "message": row.message} for row in rows],
        },
    )
    logger.info(f"Sweep of {len(rows)} points written to {path}: {dict(statuses)}")
    return EXIT_FAILURE if statuses["aborted"] else EXIT_OK
