"""Scan session tracking."""

import uuid
from dataclasses import dataclass
from datetime import datetime


@dataclass
class ScanSession:
    """Metadata for one quadratic scan."""

    session_id: str
    start_time: str  # ISO 8601 timestamp
    end_time: str | None = None
    storage_type: str = ""
    denominator: int = 1  # m in c = j/m^2
    c_min: str = ""
    c_max: str = ""
    jobs: int = 1
    scanned: int = 0
    skipped: int = 0
    max_count: int = 0
    best_c: str = ""  # comma separated parameters attaining max_count


def generate_session_id() -> str:
    """
    Generate a short session ID.

    Returns:
        First 8 characters of a UUID4 (e.g., "a3f5c2d1")
    """
    return str(uuid.uuid4())[:8]


def create_session_metadata(
    storage_type: str,
    denominator: int,
    c_min: str,
    c_max: str,
    jobs: int = 1,
    session_id: str | None = None,
) -> ScanSession:
    """
    Create metadata for a new scan session.

    Args:
        storage_type: Storage backend used
        denominator: m in c = j/m^2
        c_min: Exclusive lower end of the window
        c_max: Inclusive upper end of the window
        jobs: Worker processes
        session_id: Optional session ID (generated if not provided)
    """
    return ScanSession(
        session_id=session_id or generate_session_id(),
        start_time=datetime.now().isoformat(),
        storage_type=storage_type,
        denominator=denominator,
        c_min=c_min,
        c_max=c_max,
        jobs=jobs,
    )
