"""Database adapters: an embedded sqlite engine and a scripted mock.

The adapter contract is the portability seam: execute with a deadline,
cancel, table sizing, and catalog reflection. rows_scanned is a scan-space
measure: the summed row counts of the stored relations a statement reads,
as reported by the adapter.
"""

from __future__ import annotations

import sqlite3
import time
from dataclasses import dataclass, field
from typing import Protocol

from eagersql.errors import AdapterError, AdapterTimeout
from eagersql.sqlcore.resolve import SchemaCatalog


@dataclass
class ExecBatch:
    columns: list[str]
    rows: list[tuple]
    rows_scanned: int


class Adapter(Protocol):
    def execute(
        self,
        sql: str,
        params: tuple = (),
        deadline: float | None = None,
        scan_tables: tuple[str, ...] = (),
    ) -> ExecBatch: ...

    def cancel(self) -> None: ...

    def table_rows(self, name: str) -> int: ...

    def table_size(self, name: str) -> int: ...

    def catalog(self) -> SchemaCatalog: ...


class SqliteAdapter:
    """Embedded engine adapter over a single sqlite connection.

    Deadlines use the progress handler: once elapsed time passes the
    deadline the statement is aborted, surfacing as AdapterTimeout. Temp
    tables are per-connection, which is exactly the session scoping the
    middleware needs.
    """

    def __init__(self, conn: sqlite3.Connection | None = None, path: str = ":memory:"):
        self.conn = conn or sqlite3.connect(path)
        self.statements: list[str] = []
        self._row_cache: dict[str, int] = {}

    def execute(
        self,
        sql: str,
        params: tuple = (),
        deadline: float | None = None,
        scan_tables: tuple[str, ...] = (),
    ) -> ExecBatch:
        self.statements.append(sql)
        scanned = sum(self.table_rows(t) for t in scan_tables)
        if deadline is not None:
            start = time.monotonic()
            self.conn.set_progress_handler(
                lambda: 1 if time.monotonic() - start > deadline else 0, 200
            )
        try:
            cursor = self.conn.execute(sql, params)
            rows = cursor.fetchall()
        except sqlite3.OperationalError as exc:
            if "interrupt" in str(exc).lower():
                raise AdapterTimeout(str(exc)) from exc
            raise AdapterError(str(exc)) from exc
        except sqlite3.DatabaseError as exc:
            raise AdapterError(str(exc)) from exc
        finally:
            if deadline is not None:
                self.conn.set_progress_handler(None, 0)
        columns = [d[0] for d in cursor.description] if cursor.description else []
        self._row_cache.clear()
        return ExecBatch(columns, [tuple(r) for r in rows], scanned)

    def cancel(self) -> None:
        self.conn.interrupt()

    def table_rows(self, name: str) -> int:
        if name not in self._row_cache:
            try:
                row = self.conn.execute(f"SELECT count(*) FROM {name}").fetchone()
                self._row_cache[name] = int(row[0])
            except sqlite3.DatabaseError:
                self._row_cache[name] = 0
        return self._row_cache[name]

    def table_size(self, name: str) -> int:
        rows = self.table_rows(name)
        if rows == 0:
            return 0
        try:
            sample = self.conn.execute(f"SELECT * FROM {name} LIMIT 1").fetchone()
        except sqlite3.DatabaseError:
            return 0
        width = sum(len(str(v)) + 8 for v in sample) if sample else 8
        return rows * width

    def catalog(self) -> SchemaCatalog:
        tables: dict[str, list[str]] = {}
        types: dict[tuple[str, str], str] = {}
        listing = self.conn.execute(
            "SELECT name FROM sqlite_master WHERE type = 'table'"
        ).fetchall()
        for (name,) in listing:
            info = self.conn.execute(f"PRAGMA table_info({name})").fetchall()
            tables[name] = [col[1] for col in info]
            for col in info:
                decl = (col[2] or "").upper()
                kind = "num" if any(k in decl for k in ("INT", "REAL", "NUM")) else "str"
                types[(name, col[1])] = kind
        return SchemaCatalog(tables, types)

    def close(self) -> None:
        self.conn.close()


@dataclass
class MockAdapter:
    """Deterministic scripted adapter for timeout/cancel tests.

    `latencies` maps a statement substring to a simulated duration; when the
    duration exceeds the deadline the statement times out without sleeping.
    `results` maps a substring to (columns, rows).
    """

    latencies: dict[str, float] = field(default_factory=dict)
    results: dict[str, tuple[list[str], list[tuple]]] = field(default_factory=dict)
    row_counts: dict[str, int] = field(default_factory=dict)
    statements: list[str] = field(default_factory=list)
    cancelled: int = 0
    events: list[str] = field(default_factory=list)

    def _latency(self, sql: str) -> float:
        for pattern, value in self.latencies.items():
            if pattern in sql:
                return value
        return 0.0

    def execute(
        self,
        sql: str,
        params: tuple = (),
        deadline: float | None = None,
        scan_tables: tuple[str, ...] = (),
    ) -> ExecBatch:
        self.statements.append(sql)
        self.events.append(f"execute:{sql.split(None, 1)[0].lower()}")
        if deadline is not None and self._latency(sql) > deadline:
            self.events.append("timeout")
            raise AdapterTimeout(f"simulated latency exceeded deadline {deadline}")
        for pattern, (columns, rows) in self.results.items():
            if pattern in sql:
                scanned = sum(self.table_rows(t) for t in scan_tables)
                return ExecBatch(list(columns), list(rows), scanned)
        return ExecBatch([], [], sum(self.table_rows(t) for t in scan_tables))

    def cancel(self) -> None:
        self.cancelled += 1
        self.events.append("cancel")

    def table_rows(self, name: str) -> int:
        return self.row_counts.get(name, 0)

    def table_size(self, name: str) -> int:
        return self.table_rows(name) * 16

    def catalog(self) -> SchemaCatalog:
        return SchemaCatalog({name: [] for name in self.row_counts})
