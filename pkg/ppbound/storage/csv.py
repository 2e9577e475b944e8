"""CSV storage backend for scan rows."""

import csv
import logging
from pathlib import Path

from ppbound.storage.base import ResultStorage, ScanRow

logger = logging.getLogger(__name__)

HEADER = [
    "session_id",
    "c",
    "finite_count",
    "total",
    "max_tail",
    "cycle_lengths",
    "timestamp",
]


class CSVStorage(ResultStorage):
    """CSV file storage backend, appending to an existing file."""

    def __init__(self, filename: str = "ppbound_scan.csv"):
        """
        Initialize CSV storage.

        Args:
            filename: Path to CSV file for storing rows
        """
        self.filename = filename
        self.file_handle = None
        self.csv_writer = None
        self._initialize_file()

    def _initialize_file(self) -> None:
        """Open the CSV file, writing the header if it is new."""
        file_path = Path(self.filename)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        file_exists = file_path.exists()

        self.file_handle = open(self.filename, "a", newline="", encoding="utf-8")
        self.csv_writer = csv.writer(self.file_handle)

        if not file_exists or file_path.stat().st_size == 0:
            self.csv_writer.writerow(HEADER)
            self.file_handle.flush()
            logger.info(f"Created new CSV file: {self.filename}")

    def save_row(self, row: ScanRow) -> None:
        if not self.csv_writer:
            logger.error("CSV writer not initialized")
            return

        self.csv_writer.writerow(
            [
                row.session_id,
                row.c,
                row.finite_count,
                row.total,
                row.max_tail,
                row.cycle_lengths,
                row.timestamp,
            ]
        )
        logger.debug(f"Saved row to CSV: c={row.c} (session: {row.session_id})")

    def save_rows(self, rows: list[ScanRow]) -> None:
        for row in rows:
            self.save_row(row)
        self.flush()
        logger.info(f"Saved {len(rows)} scan rows to {self.filename}")

    def flush(self) -> None:
        if self.file_handle:
            self.file_handle.flush()

    def close(self) -> None:
        if self.file_handle:
            self.flush()
            self.file_handle.close()
            self.file_handle = None
            self.csv_writer = None
            logger.info(f"Closed CSV file: {self.filename}")
