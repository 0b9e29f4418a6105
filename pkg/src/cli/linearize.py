"""
linearize: map a scenario's trajectory to reference coordinates and fit it.
"""

import argparse
import logging
from pathlib import Path

from src.cli.common import Subparsers, add_output_argument, add_scenario_argument
from src.core.exceptions import EXIT_FAILURE, EXIT_OK
from src.repositories.report_repository import ReportRepository
from src.repositories.trajectory_repository import ReferenceRepository
from src.schemas.report import VerificationReport
from src.services.scenario_service import TRAJECTORY_TOLERANCES, load_scenario, run_scenario
from src.services.transforms_service import (
    build_reference,
    cosine_fit,
    reference_energy_report,
    sho_residual,
)

logger = logging.getLogger(__name__)


def register(subparsers: Subparsers) -> None:
    """Register the linearize subcommand."""
    parser = subparsers.add_parser(
        "linearize", help="Write the reference-coordinate trajectory and its cosine fit"
    )
    add_scenario_argument(parser)
    add_output_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    """
    Integrate, map to (tau, q, qt), fit a cosine and check the oscillator residual.

    Validity failures (non-collinear states, non-monotone tau) propagate and
    end the run with exit code 4.

    Returns:
        0 when the fit and residual checks pass, 1 otherwise.
    """
    scenario = load_scenario(args.scenario)
    out = Path(args.out)
    names = scenario.output
    omega0 = scenario.model.omega0

    trajectory, _ = run_scenario(scenario)
    reference = build_reference(scenario.model, trajectory)
    path = ReferenceRepository(out).save(names.reference, reference)

    fit = cosine_fit(reference)
    relative_error = fit.relative_frequency_error(omega0)
    checks = [
        sho_residual(reference, omega0, TRAJECTORY_TOLERANCES["sho-residual"]),
        reference_energy_report(reference, omega0, TRAJECTORY_TOLERANCES["reference-energy"]),
        VerificationReport.from_residuals(
            "cosine-fit",
            [relative_error],
            TRAJECTORY_TOLERANCES["cosine-fit"],
            notes=f"fitted omega {fit.frequency:.12g}, rms {fit.rms_error:.3g}",
        ),
    ]
    passed = all(report.passed for report in checks)

    reports = ReportRepository(out)
    reports.save_reports(names.report, checks)
    reports.save_summary(
        names.summary,
        {
            "form": scenario.eom_form,
            "samples": len(reference),
            "omega0": omega0,
            "fit": fit.model_dump(mode="json"),
            "relative_frequency_error": relative_error,
            "status": "ok" if passed else "failed-checks",
            "checks": [report.to_record() for report in checks],
        },
    )
    logger.info(f"Fitted omega {fit.frequency:.12g} against omega0 {omega0:g}; reference written to {path}")
    return EXIT_OK if passed else EXIT_FAILURE
