"""Resume support for continuing interrupted quadratic scans."""

import csv
import logging
import math
import sqlite3
from fractions import Fraction
from pathlib import Path

from sympy import integer_nthroot

from ppbound.errors import ArgumentError
from ppbound.preperiodic import quadratic_parameters

logger = logging.getLogger(__name__)


def read_scanned_values_from_csv(filename: str) -> set[Fraction]:
    """
    Read already-scanned parameters c from a CSV results file.

    Raises:
        FileNotFoundError: If the CSV file doesn't exist
    """
    if not Path(filename).exists():
        raise FileNotFoundError(f"CSV file not found: {filename}")

    scanned = set()
    with open(filename, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            if row.get("c"):
                scanned.add(Fraction(row["c"]))

    logger.info(f"Read {len(scanned)} already-scanned parameters from {filename}")
    return scanned


def read_scanned_values_from_sqlite(database: str) -> set[Fraction]:
    """
    Read already-scanned parameters c from a SQLite results database.

    Raises:
        FileNotFoundError: If the database file doesn't exist
    """
    if not Path(database).exists():
        raise FileNotFoundError(f"Database file not found: {database}")

    scanned = set()
    conn = sqlite3.connect(database)
    try:
        for (c,) in conn.execute("SELECT c FROM scan_results"):
            scanned.add(Fraction(c))
    finally:
        conn.close()

    logger.info(f"Read {len(scanned)} already-scanned parameters from {database}")
    return scanned


def read_scanned_values(filename: str) -> set[Fraction]:
    """
    Read already-scanned parameters, detecting CSV or SQLite by extension.

    Raises:
        FileNotFoundError: If the file doesn't exist
        ArgumentError: If the extension is not .csv or .db
    """
    suffix = Path(filename).suffix.lower()
    if suffix == ".csv":
        return read_scanned_values_from_csv(filename)
    elif suffix == ".db":
        return read_scanned_values_from_sqlite(filename)
    raise ArgumentError(f"Unsupported file format: {suffix}. Use .csv or .db files.")


def infer_denominator(values: set[Fraction]) -> int | None:
    """
    Smallest m with every c = j/m^2.

    Returns None when a denominator is not a perfect square.
    """
    m = 1
    for c in values:
        root, exact = integer_nthroot(c.denominator, 2)
        if not exact:
            return None
        m = math.lcm(m, int(root))
    return m


def prepare_resume(
    resume_file: str,
    c_min: Fraction,
    c_max: Fraction,
    m: int | None = None,
) -> tuple[int, list[Fraction], int, int]:
    """
    Work out which parameters of a scan remain.

    Args:
        resume_file: Results file (.csv or .db) from the interrupted scan
        c_min: Exclusive lower end of the window
        c_max: Inclusive upper end of the window
        m: Denominator root, inferred from the scanned values if None

    Returns:
        Tuple of (m, remaining_values, total_count, scanned_count)

    Raises:
        FileNotFoundError: If the resume file doesn't exist
        ArgumentError: If nothing was scanned or m cannot be inferred
    """
    scanned = read_scanned_values(resume_file)
    if not scanned:
        raise ArgumentError(f"No scanned parameters found in {resume_file}")

    if m is None:
        m = infer_denominator(scanned)
        if m is None:
            raise ArgumentError("Could not infer the denominator; pass --den")
        logger.info(f"Inferred denominator m={m}")

    values, _ = quadratic_parameters(m, c_min, c_max)
    remaining = [c for c in values if c not in scanned]
    done = len(values) - len(remaining)
    logger.info(
        f"Total parameters: {len(values)}, already scanned: {done}, "
        f"remaining: {len(remaining)}"
    )
    return m, remaining, len(values), done
