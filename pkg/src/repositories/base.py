"""
Base repository class for file persistence.

Provides the output directory handling shared by the CSV and JSON
repositories.
"""

import csv
import io
from collections.abc import Iterable, Sequence
from pathlib import Path


def format_float(value: float) -> str:
    """Shortest decimal string that reads back to the same float."""
    return repr(float(value))


class BaseRepository:
    """Base repository with common file operations."""

    suffix: str = ""

    def __init__(self, directory: Path | str) -> None:
        """
        Initialize the repository.

        Args:
            directory: Output directory; created on first write.
        """
        self.directory = Path(directory)

    def path_for(self, name: str) -> Path:
        """
        Resolve a file name inside the repository directory.

        Args:
            name: File stem or name; the repository suffix is added when missing.

        Returns:
            The file path.
        """
        path = self.directory / name
        if self.suffix and path.suffix != self.suffix:
            path = path.with_name(path.name + self.suffix)
        return path

    def write_text(self, name: str, text: str) -> Path:
        """
        Write UTF-8 text with LF line endings.

        Args:
            name: File name.
            text: Content.

        Returns:
            The written path.
        """
        path = self.path_for(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        return path

    def read_text(self, name: str) -> str:
        """
        Read a UTF-8 file.

        Args:
            name: File name.

        Returns:
            The content.

        Raises:
            FileNotFoundError: If the file doesn't exist.
        """
        return self.path_for(name).read_text(encoding="utf-8")

    def write_rows(self, name: str, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
        """
        Write a CSV table of pre-formatted cells.

        Args:
            name: File name.
            header: Column names.
            rows: Rows of cell strings.

        Returns:
            The written path.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return self.write_text(name, buffer.getvalue())

    def read_rows(self, name: str) -> tuple[list[str], list[list[str]]]:
        """
        Read a CSV table.

        Args:
            name: File name.

        Returns:
            Tuple of (header, rows).

        Raises:
            ValueError: If the file has no header.
        """
        reader = csv.reader(io.StringIO(self.read_text(name)))
        table = list(reader)
        if not table:
            raise ValueError(f"{self.path_for(name)} is empty")
        return table[0], table[1:]
