"""Storage backends for saving scan rows."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from datetime import datetime
from enum import Enum

from ppbound.arith import format_rational
from ppbound.preperiodic import ScanEntry

logger = logging.getLogger(__name__)


class StorageType(Enum):
    """Types of storage backends."""

    CSV = "csv"
    SQLITE = "sqlite"
    DRY_RUN = "dry-run"


@dataclass
class ScanRow:
    """One scanned parameter c as persisted."""

    session_id: str
    c: str  # "a/b"
    finite_count: int
    total: int
    max_tail: int
    cycle_lengths: str  # comma separated, e.g. "1,3"
    timestamp: str

    @classmethod
    def from_entry(
        cls, entry: ScanEntry, session_id: str, timestamp: str | None = None
    ) -> "ScanRow":
        return cls(
            session_id=session_id,
            c=format_rational(entry.c),
            finite_count=entry.finite_count,
            total=entry.total,
            max_tail=entry.max_tail,
            cycle_lengths=",".join(str(n) for n in entry.cycle_lengths),
            timestamp=timestamp or datetime.now().isoformat(),
        )


class ResultStorage(ABC):
    """Abstract base class for scan row storage backends."""

    @abstractmethod
    def save_row(self, row: ScanRow) -> None:
        """
        Save a single scan row.

        Args:
            row: ScanRow to save
        """

    @abstractmethod
    def save_rows(self, rows: list[ScanRow]) -> None:
        """
        Save multiple scan rows.

        Args:
            rows: List of ScanRows to save
        """

    @abstractmethod
    def flush(self) -> None:
        """Flush any buffered rows to storage."""

    @abstractmethod
    def close(self) -> None:
        """Close the storage backend and ensure all data is saved."""


class DryRunStorage(ResultStorage):
    """Storage backend that doesn't actually save anything (dry-run mode)."""

    def __init__(self):
        self.row_count = 0

    def save_row(self, row: ScanRow) -> None:
        self.row_count += 1
        logger.debug(f"[DRY-RUN] Would save row: c={row.c} count={row.finite_count}")

    def save_rows(self, rows: list[ScanRow]) -> None:
        for row in rows:
            self.save_row(row)

    def flush(self) -> None:
        logger.debug(f"[DRY-RUN] Would flush {self.row_count} rows")

    def close(self) -> None:
        logger.info(
            f"[DRY-RUN] Scan complete. {self.row_count} rows would have been saved."
        )


def create_storage(storage_type: StorageType, **kwargs) -> ResultStorage:
    """
    Factory function to create storage backends.

    Args:
        storage_type: Type of storage backend to create
        **kwargs: ``filename`` (csv) or ``database`` (sqlite)

    Returns:
        ResultStorage instance

    Raises:
        ArgumentError: If storage type is invalid
    """
    from ppbound.errors import ArgumentError
    from ppbound.settings import load_settings

    results_dir = load_settings().results_dir

    if storage_type == StorageType.DRY_RUN:
        return DryRunStorage()

    elif storage_type == StorageType.CSV:
        from ppbound.storage.csv import CSVStorage

        filename = kwargs.get("filename") or f"{results_dir}/ppbound_scan.csv"
        return CSVStorage(filename=filename)

    elif storage_type == StorageType.SQLITE:
        from ppbound.storage.sqlite import SQLiteStorage

        database = kwargs.get("database") or f"{results_dir}/ppbound_scan.db"
        return SQLiteStorage(database=database)

    else:
        raise ArgumentError(f"Unknown storage type: {storage_type}")
