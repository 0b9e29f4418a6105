"""
Trajectory repository for CSV persistence of integration output.
"""

from collections.abc import Sequence
from pathlib import Path

import numpy as np

from src.repositories.base import BaseRepository, format_float
from src.schemas.model import OscillatorModel
from src.schemas.state import ReferenceTrajectory, Trajectory


def trajectory_header(dim: int) -> list[str]:
    """Column names t, tau, x1..xn, v1..vn, E."""
    return ["t", "tau", *(f"x{i}" for i in range(1, dim + 1)), *(f"v{i}" for i in range(1, dim + 1)), "E"]


def reference_header(dim: int) -> list[str]:
    """Column names tau, q1..qn, qt1..qtn."""
    return ["tau", *(f"q{i}" for i in range(1, dim + 1)), *(f"qt{i}" for i in range(1, dim + 1))]


def _check_header(found: Sequence[str], expected: Sequence[str], path: Path) -> None:
    if list(found) != list(expected):
        raise ValueError(f"{path}: expected header {','.join(expected)}, got {','.join(found)}")


class TrajectoryRepository(BaseRepository):
    """Repository for trajectory CSV files."""

    suffix = ".csv"

    def save(self, name: str, trajectory: Trajectory) -> Path:
        """
        Write one row per recorded sample with round-trip float text.

        Args:
            name: File name.
            trajectory: Samples to write.

        Returns:
            The written path.
        """
        columns = np.column_stack(
            (trajectory.t, trajectory.tau, trajectory.x, trajectory.v, trajectory.energy)
        )
        rows = ([format_float(value) for value in row] for row in columns)
        return self.write_rows(name, trajectory_header(trajectory.dim), rows)

    def save_partial(self, name: str, trajectory: Trajectory | None, dim: int) -> Path:
        """
        Flush whatever was recorded before a failure; header only when nothing was.

        Args:
            name: File name.
            trajectory: Partial samples, if any.
            dim: Model dimension for the header.

        Returns:
            The written path.
        """
        if trajectory is None:
            return self.write_rows(name, trajectory_header(dim), [])
        return self.save(name, trajectory)

    def load(self, name: str, model: OscillatorModel) -> Trajectory:
        """
        Read a trajectory back.

        Args:
            name: File name.
            model: Model the samples belong to.

        Returns:
            The trajectory with bit-identical values.

        Raises:
            FileNotFoundError: If the file doesn't exist.
            ValueError: On a header that does not match the model or no samples.
        """
        header, rows = self.read_rows(name)
        n = model.dim
        _check_header(header, trajectory_header(n), self.path_for(name))
        if not rows:
            raise ValueError(f"{self.path_for(name)} has no samples")
        data = np.array([[float(cell) for cell in row] for row in rows], dtype=np.float64).reshape(-1, 2 * n + 3)
        return Trajectory(
            model=model,
            t=data[:, 0],
            tau=data[:, 1],
            x=data[:, 2 : 2 + n],
            v=data[:, 2 + n : 2 + 2 * n],
            energy=data[:, 2 + 2 * n],
        )


class ReferenceRepository(BaseRepository):
    """Repository for reference-coordinate CSV files."""

    suffix = ".csv"

    def save(self, name: str, reference: ReferenceTrajectory) -> Path:
        """
        Write tau, q and qt per sample.

        Args:
            name: File name.
            reference: Reference samples.

        Returns:
            The written path.
        """
        columns = np.column_stack((reference.tau, reference.q, reference.qtilde))
        rows = ([format_float(value) for value in row] for row in columns)
        return self.write_rows(name, reference_header(reference.dim), rows)

    def load(self, name: str) -> ReferenceTrajectory:
        """
        Read reference samples back.

        Args:
            name: File name.

        Returns:
            The reference trajectory.

        Raises:
            FileNotFoundError: If the file doesn't exist.
            ValueError: On a malformed header.
        """
        header, rows = self.read_rows(name)
        n = (len(header) - 1) // 2
        _check_header(header, reference_header(n), self.path_for(name))
        data = np.array([[float(cell) for cell in row] for row in rows], dtype=np.float64).reshape(-1, 2 * n + 1)
        return ReferenceTrajectory(tau=data[:, 0], q=data[:, 1 : 1 + n], qtilde=data[:, 1 + n :])
