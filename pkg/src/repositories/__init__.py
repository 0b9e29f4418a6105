"""Repositories package for CSV and JSON output files."""

from src.repositories.base import BaseRepository
from src.repositories.report_repository import ReportRepository
from src.repositories.trajectory_repository import ReferenceRepository, TrajectoryRepository

__all__ = [
    "BaseRepository",
    "TrajectoryRepository",
    "ReferenceRepository",
    "ReportRepository",
]
