"""
Report repository for JSON verification reports, run summaries and sweep tables.
"""

import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from src.repositories.base import BaseRepository, format_float
from src.schemas.report import VerificationReport
from src.schemas.sweep import SweepRow

SWEEP_COLUMNS = tuple(SweepRow.model_fields)


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format_float(value)
    return str(value)


class ReportRepository(BaseRepository):
    """Repository for report and summary files."""

    def save_reports(self, name: str, reports: Sequence[VerificationReport]) -> Path:
        """
        Write reports as a JSON array with the external field names.

        Args:
            name: File name.
            reports: Reports to write.

        Returns:
            The written path.
        """
        records = [report.to_record() for report in reports]
        return self.write_text(name, json.dumps(records, indent=2) + "\n")

    def load_reports(self, name: str) -> list[VerificationReport]:
        """
        Read a JSON array of reports.

        Args:
            name: File name.

        Returns:
            The reports.

        Raises:
            FileNotFoundError: If the file doesn't exist.
        """
        records = json.loads(self.read_text(name))
        return [VerificationReport.model_validate(record) for record in records]

    def save_summary(self, name: str, summary: dict[str, Any]) -> Path:
        """
        Write a run summary JSON object.

        Args:
            name: File name.
            summary: JSON-serializable mapping.

        Returns:
            The written path.
        """
        return self.write_text(name, json.dumps(summary, indent=2) + "\n")

    def load_summary(self, name: str) -> dict[str, Any]:
        """Read a run summary JSON object."""
        summary: dict[str, Any] = json.loads(self.read_text(name))
        return summary

    def save_sweep(self, name: str, rows: Sequence[SweepRow]) -> Path:
        """
        Write one CSV row per grid point; missing measurements are empty cells.

        Args:
            name: File name.
            rows: Sweep rows in grid order.

        Returns:
            The written path.
        """
        table = ([_cell(getattr(row, column)) for column in SWEEP_COLUMNS] for row in rows)
        return self.write_rows(name, SWEEP_COLUMNS, table)
