"""Tests for resume functionality."""

import tempfile
from fractions import Fraction
from pathlib import Path

import pytest

from ppbound.errors import ArgumentError
from ppbound.resume import (
    infer_denominator,
    prepare_resume,
    read_scanned_values,
    read_scanned_values_from_csv,
    read_scanned_values_from_sqlite,
)
from ppbound.storage import ScanRow, SQLiteStorage

CSV_HEADER = "session_id,c,finite_count,total,max_tail,cycle_lengths,timestamp\n"


@pytest.fixture
def sample_csv_file():
    """Create a CSV results file with two scanned parameters for m = 2."""
    with tempfile.NamedTemporaryFile(delete=False, suffix=".csv", mode="w") as f:
        csv_file = f.name
        f.write(CSV_HEADER)
        f.write("abc12345,-3/4,4,5,1,\"1,1\",2025-11-15T12:00:00\n")
        f.write("abc12345,-1/4,0,1,0,,2025-11-15T12:01:00\n")

    yield csv_file
    Path(csv_file).unlink(missing_ok=True)


@pytest.fixture
def sample_sqlite_file():
    """Create a SQLite results database with the same two parameters."""
    with tempfile.NamedTemporaryFile(delete=False, suffix=".db") as f:
        db_file = f.name

    storage = SQLiteStorage(database=db_file)
    storage.save_rows(
        [
            ScanRow("abc12345", "-3/4", 4, 5, 1, "1,1", "2025-11-15T12:00:00"),
            ScanRow("abc12345", "-1/4", 0, 1, 0, "", "2025-11-15T12:01:00"),
        ]
    )
    storage.close()

    yield db_file
    Path(db_file).unlink(missing_ok=True)


# Tests for reading scanned values


def test_read_scanned_values_from_csv(sample_csv_file):
    """Test reading scanned parameters from a CSV file."""
    assert read_scanned_values_from_csv(sample_csv_file) == {
        Fraction(-3, 4),
        Fraction(-1, 4),
    }


def test_read_scanned_values_from_csv_nonexistent():
    """Test reading from a nonexistent CSV file."""
    with pytest.raises(FileNotFoundError):
        read_scanned_values_from_csv("nonexistent.csv")


def test_read_scanned_values_from_sqlite(sample_sqlite_file):
    """Test reading scanned parameters from a SQLite database."""
    assert read_scanned_values_from_sqlite(sample_sqlite_file) == {
        Fraction(-3, 4),
        Fraction(-1, 4),
    }


def test_read_scanned_values_from_sqlite_nonexistent():
    """Test reading from a nonexistent SQLite database."""
    with pytest.raises(FileNotFoundError):
        read_scanned_values_from_sqlite("nonexistent.db")


def test_read_scanned_values_auto_detects(sample_csv_file, sample_sqlite_file):
    """Test format detection by extension."""
    assert read_scanned_values(sample_csv_file) == read_scanned_values(sample_sqlite_file)


def test_read_scanned_values_unsupported_format():
    """Test reading from an unsupported file format."""
    with tempfile.NamedTemporaryFile(suffix=".txt") as f:
        with pytest.raises(ArgumentError, match="Unsupported file format"):
            read_scanned_values(f.name)


# Tests for denominator inference


def test_infer_denominator():
    """Test inferring m from square denominators."""
    assert infer_denominator({Fraction(1, 4), Fraction(-3, 4), Fraction(0)}) == 2
    assert infer_denominator({Fraction(1, 144), Fraction(1, 16)}) == 12
    assert infer_denominator({Fraction(-1, 9), Fraction(1, 4)}) == 6


def test_infer_denominator_integers():
    """Test that integer parameters give m = 1."""
    assert infer_denominator({Fraction(-2), Fraction(0)}) == 1


def test_infer_denominator_non_square():
    """Test that a non-square denominator cannot be inferred."""
    assert infer_denominator({Fraction(1, 2)}) is None


# Tests for prepare_resume


def test_prepare_resume_with_denominator(sample_csv_file):
    """Test preparing a resume with an explicit m."""
    m, remaining, total, scanned = prepare_resume(
        sample_csv_file, Fraction(-1), Fraction(0), m=2
    )
    assert m == 2
    assert remaining == [Fraction(0)]
    assert total == 3
    assert scanned == 2


def test_prepare_resume_infers_denominator(sample_sqlite_file):
    """Test preparing a resume with an inferred m."""
    m, remaining, total, scanned = prepare_resume(
        sample_sqlite_file, Fraction(-1), Fraction(1, 4)
    )
    assert m == 2
    assert remaining == [Fraction(0), Fraction(1, 4)]
    assert total == 4
    assert scanned == 2


def test_prepare_resume_nonexistent_file():
    """Test preparing a resume from a nonexistent file."""
    with pytest.raises(FileNotFoundError):
        prepare_resume("nonexistent.csv", Fraction(-1), Fraction(0), m=2)


def test_prepare_resume_empty_file():
    """Test preparing a resume from a CSV file with only a header."""
    with tempfile.NamedTemporaryFile(delete=False, suffix=".csv", mode="w") as f:
        csv_file = f.name
        f.write(CSV_HEADER)

    try:
        with pytest.raises(ArgumentError, match="No scanned parameters found"):
            prepare_resume(csv_file, Fraction(-1), Fraction(0), m=2)
    finally:
        Path(csv_file).unlink(missing_ok=True)


def test_prepare_resume_cannot_infer_denominator():
    """Test when m cannot be inferred."""
    with tempfile.NamedTemporaryFile(delete=False, suffix=".csv", mode="w") as f:
        csv_file = f.name
        f.write(CSV_HEADER)
        f.write("abc12345,1/2,0,1,0,,2025-11-15T12:00:00\n")

    try:
        with pytest.raises(ArgumentError, match="Could not infer the denominator"):
            prepare_resume(csv_file, Fraction(-1), Fraction(0))
    finally:
        Path(csv_file).unlink(missing_ok=True)
