"""SQLite database storage backend for scan rows."""

import logging
import sqlite3
from pathlib import Path

from ppbound.session import ScanSession
from ppbound.storage.base import ResultStorage, ScanRow

logger = logging.getLogger(__name__)

INSERT_ROW = """
    INSERT INTO scan_results
    (session_id, c, finite_count, total, max_tail, cycle_lengths, timestamp)
    VALUES (?, ?, ?, ?, ?, ?, ?)
"""

SESSION_COLUMNS = (
    "session_id, start_time, end_time, storage_type, denominator, c_min, c_max, "
    "jobs, scanned, skipped, max_count, best_c"
)


def _row_values(row: ScanRow) -> tuple:
    return (
        row.session_id,
        row.c,
        row.finite_count,
        row.total,
        row.max_tail,
        row.cycle_lengths,
        row.timestamp,
    )


class SQLiteStorage(ResultStorage):
    """SQLite database storage backend with a sessions table."""

    def __init__(self, database: str = "ppbound_scan.db"):
        """
        Initialize SQLite storage.

        Args:
            database: Path to SQLite database file
        """
        self.database = database
        self.connection = None
        self._initialize_database()

    def _initialize_database(self) -> None:
        """Connect and create tables and indexes if needed."""
        db_path = Path(self.database)
        db_path.parent.mkdir(parents=True, exist_ok=True)
        db_exists = db_path.exists()

        self.connection = sqlite3.connect(self.database)
        cursor = self.connection.cursor()

        cursor.execute("""
            CREATE TABLE IF NOT EXISTS scan_results (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                session_id TEXT NOT NULL,
                c TEXT NOT NULL,
                finite_count INTEGER NOT NULL,
                total INTEGER NOT NULL,
                timestamp TEXT NOT NULL
            )
        """)

        cursor.execute("""
            CREATE TABLE IF NOT EXISTS sessions (
                session_id TEXT PRIMARY KEY,
                start_time TEXT NOT NULL,
                end_time TEXT,
                storage_type TEXT,
                denominator INTEGER,
                c_min TEXT,
                c_max TEXT,
                jobs INTEGER DEFAULT 1,
                scanned INTEGER DEFAULT 0,
                skipped INTEGER DEFAULT 0,
                max_count INTEGER DEFAULT 0,
                best_c TEXT
            )
        """)

        cursor.execute("""
            CREATE INDEX IF NOT EXISTS idx_session_id
            ON scan_results(session_id)
        """)

        cursor.execute("""
            CREATE INDEX IF NOT EXISTS idx_c
            ON scan_results(c)
        """)

        cursor.execute("""
            CREATE INDEX IF NOT EXISTS idx_finite_count
            ON scan_results(finite_count)
        """)

        self._migrate_schema(cursor)
        self.connection.commit()

        if not db_exists:
            logger.info(f"Created new SQLite database: {self.database}")
        else:
            logger.info(f"Opened existing SQLite database: {self.database}")

    def save_row(self, row: ScanRow) -> None:
        if not self.connection:
            logger.error("Database connection not initialized")
            return

        self.connection.execute(INSERT_ROW, _row_values(row))
        logger.debug(f"Saved row to database: c={row.c} (session: {row.session_id})")

    def save_rows(self, rows: list[ScanRow]) -> None:
        if not self.connection:
            logger.error("Database connection not initialized")
            return

        self.connection.executemany(INSERT_ROW, [_row_values(row) for row in rows])
        self.connection.commit()
        logger.info(f"Saved {len(rows)} scan rows to database")

    def flush(self) -> None:
        """Commit any pending transactions."""
        if self.connection:
            self.connection.commit()

    def save_session(self, session: ScanSession) -> None:
        """
        Save or update session metadata.

        Args:
            session: ScanSession to save
        """
        if not self.connection:
            logger.error("Database connection not initialized")
            return

        self.connection.execute(
            f"INSERT OR REPLACE INTO sessions ({SESSION_COLUMNS}) "
            "VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
            (
                session.session_id,
                session.start_time,
                session.end_time,
                session.storage_type,
                session.denominator,
                session.c_min,
                session.c_max,
                session.jobs,
                session.scanned,
                session.skipped,
                session.max_count,
                session.best_c,
            ),
        )
        self.connection.commit()
        logger.info(f"Saved session metadata: {session.session_id}")

    def get_session(self, session_id: str) -> ScanSession | None:
        """
        Retrieve session metadata by session ID.

        Returns:
            ScanSession if found, None otherwise
        """
        if not self.connection:
            logger.error("Database connection not initialized")
            return None

        cursor = self.connection.execute(
            f"SELECT {SESSION_COLUMNS} FROM sessions WHERE session_id = ?",
            (session_id,),
        )
        row = cursor.fetchone()
        if row is None:
            return None
        return ScanSession(
            session_id=row[0],
            start_time=row[1],
            end_time=row[2],
            storage_type=row[3],
            denominator=row[4],
            c_min=row[5],
            c_max=row[6],
            jobs=row[7],
            scanned=row[8],
            skipped=row[9],
            max_count=row[10],
            best_c=row[11] or "",
        )

    def get_latest_session_id(self) -> str | None:
        """
        Get the most recent session ID from the database.

        Returns:
            Latest session ID if found, None if no sessions exist
        """
        if not self.connection:
            logger.error("Database connection not initialized")
            return None

        cursor = self.connection.execute(
            "SELECT session_id FROM sessions ORDER BY start_time DESC LIMIT 1"
        )
        row = cursor.fetchone()
        return row[0] if row else None

    def _migrate_schema(self, cursor) -> None:
        """Add the orbit portrait columns to databases written before they existed."""
        cursor.execute("PRAGMA table_info(scan_results)")
        existing_columns = {row[1] for row in cursor.fetchall()}

        new_columns = {
            "max_tail": "INTEGER DEFAULT 0",
            "cycle_lengths": "TEXT DEFAULT ''",
        }

        for column_name, column_type in new_columns.items():
            if column_name not in existing_columns:
                try:
                    cursor.execute(
                        f"ALTER TABLE scan_results ADD COLUMN {column_name} {column_type}"
                    )
                    logger.info(f"Added column '{column_name}' to scan_results table")
                except sqlite3.Error as e:
                    logger.warning(f"Failed to add column '{column_name}': {e}")

    def close(self) -> None:
        """Close the database connection."""
        if self.connection:
            self.flush()
            self.connection.close()
            self.connection = None
            logger.info(f"Closed database: {self.database}")
