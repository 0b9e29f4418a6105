"""
simulate: integrate one scenario and write its trajectory.
"""

import argparse
import logging
from pathlib import Path

from src.cli.common import (
    Subparsers,
    add_output_argument,
    add_scenario_argument,
    add_tolerance_argument,
    parse_tolerances,
)
from src.core.exceptions import EXIT_FAILURE, EXIT_OK, ConfigError, DomainError, StepLimitError
from src.repositories.report_repository import ReportRepository
from src.repositories.trajectory_repository import TrajectoryRepository
from src.services.scenario_service import (
    TRAJECTORY_TOLERANCES,
    load_scenario,
    run_scenario,
    run_summary,
    run_trajectory_checks,
)

logger = logging.getLogger(__name__)


def register(subparsers: Subparsers) -> None:
    """Register the simulate subcommand."""
    parser = subparsers.add_parser("simulate", help="Integrate a scenario and write its trajectory CSV")
    add_scenario_argument(parser)
    add_output_argument(parser)
    add_tolerance_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    """
    Integrate the scenario, write the trajectory and a run summary.

    Domain exits and step-limit failures still flush whatever was recorded.

    Returns:
        0 on success with every listed check passing, 1 when a check fails or
        the step limit is hit, 2 on a domain exit.
    """
    scenario = load_scenario(args.scenario)
    tolerances = parse_tolerances(args.tol)
    unknown = sorted(set(tolerances) - set(TRAJECTORY_TOLERANCES))
    if unknown:
        raise ConfigError(f"Unknown trajectory check(s) in --tol: {', '.join(unknown)}")
    out = Path(args.out)
    trajectories = TrajectoryRepository(out)
    reports = ReportRepository(out)
    names = scenario.output

    try:
        trajectory, orbit = run_scenario(scenario)
    except (DomainError, StepLimitError) as exc:
        status = "domain-exit" if isinstance(exc, DomainError) else "step-limit"
        path = trajectories.save_partial(names.trajectory, exc.partial, scenario.model.dim)
        reports.save_summary(names.summary, run_summary(scenario, status, exc.partial, message=exc.detail))
        logger.error(f"{status}: {exc.detail}; partial trajectory written to {path}")
        return exc.exit_code

    path = trajectories.save(names.trajectory, trajectory)
    checks = run_trajectory_checks(scenario, trajectory, orbit, tolerances)
    passed = all(report.passed for report in checks)
    status = "ok" if passed else "failed-checks"
    reports.save_summary(names.summary, run_summary(scenario, status, trajectory, reports=checks))
    if checks:
        reports.save_reports(names.report, checks)
    logger.info(f"Wrote {len(trajectory)} samples to {path}")
    return EXIT_OK if passed else EXIT_FAILURE
