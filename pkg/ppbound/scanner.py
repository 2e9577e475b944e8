"""Quadratic family scans with persistent results and session tracking."""

import logging
from datetime import datetime
from fractions import Fraction

from ppbound.arith import format_rational, to_rational
from ppbound.preperiodic import ScanResult, quadratic_parameters, scan_values
from ppbound.session import create_session_metadata, generate_session_id
from ppbound.storage import ResultStorage, ScanRow, StorageType, create_storage

logger = logging.getLogger(__name__)

DEFAULT_BATCH_SIZE = 256


class QuadraticScanner:
    """Scans z^2 + c over c = j/m^2 in a window and stores one row per c."""

    def __init__(
        self,
        m: int,
        c_min: Fraction,
        c_max: Fraction,
        storage: ResultStorage | None = None,
        storage_type: StorageType = StorageType.DRY_RUN,
        jobs: int = 1,
        max_candidates: int | None = None,
        session_id: str | None = None,
        batch_size: int = DEFAULT_BATCH_SIZE,
        **kwargs,
    ):
        """
        Initialize the scanner.

        Args:
            m: Denominator root, c = j/m^2
            c_min: Exclusive lower end of the window
            c_max: Inclusive upper end of the window
            storage: Pre-configured storage instance (optional)
            storage_type: Type of storage to create if storage not provided
            jobs: Worker processes for enumeration
            max_candidates: Candidate box guard per polynomial
            session_id: Session ID grouping the rows (generated if not provided)
            batch_size: Parameters enumerated between saves
            **kwargs: Storage configuration (filename, database)
        """
        storage_kwargs = {k: v for k, v in kwargs.items() if k in ["filename", "database"]}
        if storage is not None:
            self.storage = storage
        else:
            self.storage = create_storage(storage_type, **storage_kwargs)

        self.m = m
        self.c_min = Fraction(c_min)
        self.c_max = Fraction(c_max)
        self.jobs = jobs
        self.max_candidates = max_candidates
        self.batch_size = max(1, batch_size)

        self.session_id = session_id or generate_session_id()
        self.session_metadata = create_session_metadata(
            session_id=self.session_id,
            storage_type=storage_type.value,
            denominator=m,
            c_min=format_rational(self.c_min),
            c_max=format_rational(self.c_max),
            jobs=jobs,
        )
        self._load_previous_session()
        self._session_saved = False

    def parameters(self) -> tuple[list[Fraction], int]:
        """Admissible parameters in the window and the number skipped."""
        return quadratic_parameters(self.m, self.c_min, self.c_max)

    def count_parameters(self) -> int:
        return len(self.parameters()[0])

    def _load_previous_session(self) -> None:
        """Carry the totals of an existing session with this ID forward."""
        if not hasattr(self.storage, "get_session"):
            return
        previous = self.storage.get_session(self.session_id)
        if previous is None:
            return
        meta = self.session_metadata
        meta.start_time = previous.start_time
        meta.scanned = previous.scanned
        meta.skipped = previous.skipped
        meta.max_count = previous.max_count
        meta.best_c = previous.best_c
        if previous.c_min:
            meta.c_min = format_rational(min(to_rational(previous.c_min), self.c_min))
        if previous.c_max:
            meta.c_max = format_rational(max(to_rational(previous.c_max), self.c_max))
        logger.info(
            f"Continuing session {self.session_id}: {previous.scanned} parameters "
            f"already scanned"
        )

    def _save_session_metadata(self) -> None:
        """Save or update session metadata when the storage supports it."""
        if hasattr(self.storage, "save_session"):
            try:
                self.storage.save_session(self.session_metadata)
                self._session_saved = True
                logger.debug(f"Saved session metadata for session {self.session_id}")
            except Exception as e:
                logger.warning(f"Failed to save session metadata: {e}")
        else:
            logger.debug(
                f"Storage type {type(self.storage).__name__} "
                "does not support session metadata"
            )
            self._session_saved = True

    def scan(self, values: list[Fraction] | None = None) -> ScanResult:
        """
        Enumerate every parameter and persist the rows.

        Rows are saved batch by batch, so an interrupted scan keeps every
        finished batch for a later resume.

        Args:
            values: Parameters to scan (defaults to the whole window, e.g. the
                remainder of a resumed scan)

        Returns:
            ScanResult over the scanned parameters, sorted by c
        """
        if not self._session_saved:
            self._save_session_metadata()

        if values is None:
            values, skipped = self.parameters()
        else:
            skipped = 0
        values = sorted(values)

        entries = []
        for start in range(0, len(values), self.batch_size):
            batch = scan_values(
                values[start : start + self.batch_size],
                jobs=self.jobs,
                max_candidates=self.max_candidates,
            )
            timestamp = datetime.now().isoformat()
            self.storage.save_rows(
                [ScanRow.from_entry(e, self.session_id, timestamp) for e in batch]
            )
            entries.extend(batch)
            logger.debug(f"Saved {len(entries)}/{len(values)} rows")

        result = ScanResult(self.m, self.c_min, self.c_max, tuple(entries), skipped)
        meta = self.session_metadata
        meta.scanned += len(entries)
        meta.skipped += skipped
        if entries and result.max_count >= meta.max_count:
            best = [format_rational(c) for c in result.argmax]
            if result.max_count == meta.max_count and meta.best_c:
                best = meta.best_c.split(",") + best
            meta.max_count = result.max_count
            meta.best_c = ",".join(best)
        logger.info(
            f"Scanned {len(entries)} parameters; max finite count {result.max_count}"
        )
        return result

    def cleanup(self) -> None:
        """Record the end time, save metadata and close storage."""
        self.session_metadata.end_time = datetime.now().isoformat()
        self._save_session_metadata()
        if self.storage:
            self.storage.flush()
            self.storage.close()
