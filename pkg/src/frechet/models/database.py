"""SQLite vertex store for Frechet Polytope."""

import json
import sqlite3
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional

from frechet.config import Settings
from frechet.models.entities import FrechetClass, Pmf
from frechet.utils.formats import pmf_from_key


SCHEMA_VERSION = 1

SCHEMA_SQL = """
CREATE TABLE IF NOT EXISTS schema_version (
    version INTEGER PRIMARY KEY
);

CREATE TABLE IF NOT EXISTS classes (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    d INTEGER NOT NULL,
    s INTEGER NOT NULL,
    t INTEGER NOT NULL,
    created_at TIMESTAMP,
    UNIQUE (d, s, t)
);

CREATE TABLE IF NOT EXISTS vertices (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    class_id INTEGER NOT NULL REFERENCES classes(id) ON DELETE CASCADE,
    key TEXT NOT NULL,
    support_size INTEGER NOT NULL,
    source TEXT DEFAULT 'bruteforce',
    extremal INTEGER DEFAULT 1,
    created_at TIMESTAMP,
    UNIQUE (class_id, key)
);

CREATE TABLE IF NOT EXISTS search_results (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    class_id INTEGER NOT NULL REFERENCES classes(id) ON DELETE CASCADE,
    cursor INTEGER,
    record TEXT NOT NULL,  -- JSON search record
    extremal INTEGER DEFAULT 0,
    created_at TIMESTAMP
);

CREATE TABLE IF NOT EXISTS sweep_progress (
    class_id INTEGER NOT NULL REFERENCES classes(id) ON DELETE CASCADE,
    max_j INTEGER NOT NULL,
    cursor INTEGER NOT NULL DEFAULT 0,
    updated_at TIMESTAMP,
    PRIMARY KEY (class_id, max_j)
);

CREATE INDEX IF NOT EXISTS idx_vertices_class ON vertices(class_id);
CREATE INDEX IF NOT EXISTS idx_search_class ON search_results(class_id);
"""


class VertexStore:
    """SQLite catalog of vertices, search records and sweep cursors."""

    def __init__(self, db_path: Optional[Path] = None):
        """Initialize the store.

        Args:
            db_path: Path to database file. If None, uses the settings location.
        """
        if db_path is None:
            settings = Settings.from_env()
            settings.data_dir.mkdir(parents=True, exist_ok=True)
            db_path = settings.store_path

        self.db_path = Path(db_path)
        self._conn: Optional[sqlite3.Connection] = None

    def connect(self) -> None:
        """Open database connection and ensure schema exists."""
        self._conn = sqlite3.connect(self.db_path)
        self._conn.row_factory = sqlite3.Row
        self._conn.execute("PRAGMA foreign_keys = ON")
        self._init_schema()

    def close(self) -> None:
        if self._conn:
            self._conn.close()
            self._conn = None

    def __enter__(self) -> "VertexStore":
        self.connect()
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    @property
    def conn(self) -> sqlite3.Connection:
        """Get the database connection, connecting if necessary."""
        if self._conn is None:
            self.connect()
        return self._conn

    def _init_schema(self) -> None:
        cursor = self._conn.cursor()
        cursor.execute(
            "SELECT name FROM sqlite_master WHERE type='table' AND name='schema_version'"
        )
        if cursor.fetchone() is None:
            cursor.executescript(SCHEMA_SQL)
            cursor.execute("INSERT INTO schema_version (version) VALUES (?)", (SCHEMA_VERSION,))
            self._conn.commit()

    # -------------------------------------------------------------------------
    # Class operations
    # -------------------------------------------------------------------------

    def save_class(self, fclass: FrechetClass) -> int:
        """Return the row id of the class, inserting it if new."""
        cursor = self.conn.cursor()
        cursor.execute(
            "SELECT id FROM classes WHERE d = ? AND s = ? AND t = ?",
            (fclass.d, fclass.s, fclass.t),
        )
        row = cursor.fetchone()
        if row:
            return row["id"]
        cursor.execute(
            "INSERT INTO classes (d, s, t, created_at) VALUES (?, ?, ?, ?)",
            (fclass.d, fclass.s, fclass.t, datetime.now().isoformat()),
        )
        self.conn.commit()
        return cursor.lastrowid

    def get_all_classes(self) -> list[FrechetClass]:
        cursor = self.conn.cursor()
        cursor.execute("SELECT * FROM classes ORDER BY d, t, s")
        return [self._row_to_class(row) for row in cursor.fetchall()]

    def _row_to_class(self, row: sqlite3.Row) -> FrechetClass:
        return FrechetClass(row["d"], row["s"], row["t"])

    # -------------------------------------------------------------------------
    # Vertex operations
    # -------------------------------------------------------------------------

    def save_vertices(
        self, fclass: FrechetClass, pmfs: Iterable[Pmf], source: str = "bruteforce"
    ) -> int:
        """Store vertices, skipping keys already present. Returns the number inserted."""
        class_id = self.save_class(fclass)
        now = datetime.now().isoformat()
        cursor = self.conn.cursor()
        inserted = 0
        for pmf in pmfs:
            cursor.execute(
                """INSERT OR IGNORE INTO vertices
                   (class_id, key, support_size, source, extremal, created_at)
                   VALUES (?, ?, ?, ?, 1, ?)""",
                (class_id, pmf.key, pmf.support_size, source, now),
            )
            inserted += cursor.rowcount
        self.conn.commit()
        return inserted

    def get_vertices(self, fclass: FrechetClass) -> list[Pmf]:
        """Stored vertices of the class, sorted by canonical key."""
        class_id = self.save_class(fclass)
        cursor = self.conn.cursor()
        cursor.execute("SELECT * FROM vertices WHERE class_id = ? ORDER BY key", (class_id,))
        return [self._row_to_pmf(row, fclass) for row in cursor.fetchall()]

    def count_vertices(self, fclass: FrechetClass) -> int:
        class_id = self.save_class(fclass)
        cursor = self.conn.cursor()
        cursor.execute("SELECT COUNT(*) FROM vertices WHERE class_id = ?", (class_id,))
        return cursor.fetchone()[0]

    def delete_vertices(self, fclass: FrechetClass) -> None:
        class_id = self.save_class(fclass)
        self.conn.execute("DELETE FROM vertices WHERE class_id = ?", (class_id,))
        self.conn.commit()

    def _row_to_pmf(self, row: sqlite3.Row, fclass: FrechetClass) -> Pmf:
        return pmf_from_key(row["key"], fclass)

    # -------------------------------------------------------------------------
    # Search operations
    # -------------------------------------------------------------------------

    def save_search_record(self, fclass: FrechetClass, record: dict) -> None:
        class_id = self.save_class(fclass)
        self.conn.execute(
            """INSERT INTO search_results (class_id, cursor, record, extremal, created_at)
               VALUES (?, ?, ?, ?, ?)""",
            (
                class_id,
                record.get("cursor"),
                json.dumps(record),
                int(bool(record.get("extremal"))),
                datetime.now().isoformat(),
            ),
        )
        self.conn.commit()

    def get_search_records(self, fclass: FrechetClass, extremal_only: bool = False) -> list[dict]:
        class_id = self.save_class(fclass)
        query = "SELECT record FROM search_results WHERE class_id = ?"
        if extremal_only:
            query += " AND extremal = 1"
        cursor = self.conn.cursor()
        cursor.execute(query + " ORDER BY id", (class_id,))
        return [json.loads(row["record"]) for row in cursor.fetchall()]

    # -------------------------------------------------------------------------
    # Sweep progress
    # -------------------------------------------------------------------------

    def get_sweep_cursor(self, fclass: FrechetClass, max_j: int) -> int:
        """Next cursor to process; 0 when the sweep never ran."""
        class_id = self.save_class(fclass)
        cursor = self.conn.cursor()
        cursor.execute(
            "SELECT cursor FROM sweep_progress WHERE class_id = ? AND max_j = ?",
            (class_id, max_j),
        )
        row = cursor.fetchone()
        return row["cursor"] if row else 0

    def save_sweep_cursor(self, fclass: FrechetClass, max_j: int, next_cursor: int) -> None:
        class_id = self.save_class(fclass)
        self.conn.execute(
            """INSERT INTO sweep_progress (class_id, max_j, cursor, updated_at)
               VALUES (?, ?, ?, ?)
               ON CONFLICT (class_id, max_j) DO UPDATE SET
                   cursor = excluded.cursor, updated_at = excluded.updated_at""",
            (class_id, max_j, next_cursor, datetime.now().isoformat()),
        )
        self.conn.commit()
