"""Drive a session with a reveal trace and collect per-query metrics."""

from __future__ import annotations

from dataclasses import dataclass, replace

from eagersql.executor.adapter import Adapter
from eagersql.executor.engine import ExecutionEngine, ExecutionResult, ResourceBudget
from eagersql.executor.registry import TempRegistry
from eagersql.replay.classify import classify
from eagersql.replay.trace import RevealTrace
from eagersql.session.service import Session
from eagersql.sqlcore import canonicalize, decompose
from eagersql.speculator.debug import validate


class TickClock:
    """Deterministic monotonic clock: each reading advances 1 ms."""

    def __init__(self) -> None:
        self.t = 0.0

    def __call__(self) -> float:
        self.t += 0.001
        return self.t


@dataclass
class ReplayRow:
    query_id: str
    shape: str
    temp_table_count: int
    preview_count: int
    edge_count: int
    total_temp_bytes: int
    final_preview_source: str
    final_elapsed: float
    rows_scanned_speculative: int
    rows_scanned_direct: int
    error: str = ""

    FIELDS = (
        "queryId", "shape", "tempTableCount", "previewCount", "edgeCount",
        "totalTempBytes", "finalPreviewSource", "finalElapsed",
        "rowsScannedSpeculative", "rowsScannedDirect", "error",
    )

    def as_csv_row(self) -> list[str]:
        return [
            self.query_id,
            self.shape,
            str(self.temp_table_count),
            str(self.preview_count),
            str(self.edge_count),
            str(self.total_temp_bytes),
            self.final_preview_source,
            f"{self.final_elapsed:.6f}",
            str(self.rows_scanned_speculative),
            str(self.rows_scanned_direct),
            self.error,
        ]


def direct_preview(
    adapter: Adapter, text: str, catalog, budget: ResourceBudget, clock
) -> ExecutionResult:
    """Execute the final query against base tables only: empty registry,
    dependencies inlined as derived tables."""
    query = validate(text, catalog)
    blocks = decompose(canonicalize(query))
    engine = ExecutionEngine(
        adapter, session_id="direct", budget=budget,
        registry=TempRegistry(), clock=clock,
    )
    resolver: dict = {}
    for block in blocks[:-1]:
        if not block.correlated:
            resolver[block.name] = engine._substitute_deps(
                block.select, dict(resolver)
            )
    main = blocks[-1]
    limit = main.select.limit
    limit = budget.preview_limit if limit is None else min(limit, budget.preview_limit)
    main = replace(main, select=replace(main.select, limit=limit))
    return engine.run_preview(main, resolver)


def replay_trace(trace: RevealTrace, session: Session, clock=None) -> tuple[ReplayRow, dict]:
    """Feed the trace's snapshots in order; the final snapshot is the
    user-perceived query. Returns the metric row and the exported graph."""
    clock = clock or session.engine.clock
    preview_count = 0
    final_preview: dict | None = None
    for index, text in enumerate(trace.snapshots):
        last = index == len(trace.snapshots) - 1
        lines = text.split("\n")
        message = {
            "type": "snapshot",
            "text": text,
            "cursor": [len(lines) - 1, len(lines[-1])],
            "trigger": "enter" if last else "poll",
            "seq": index + 1,
        }
        for reply in session.ingest(message):
            if reply["type"] == "preview":
                preview_count += 1
                if last:
                    final_preview = reply

    dag_export = session.dag.to_json()
    direct = direct_preview(
        session.engine.adapter, trace.snapshots[-1], session.catalog,
        session.config.budget, clock,
    )
    temp_names = {
        v.temp_name for v in session.dag.vertices.values() if v.temp_name is not None
    }
    if final_preview is None:
        row = ReplayRow(
            query_id=trace.query_id,
            shape=classify(dag_export),
            temp_table_count=len(temp_names),
            preview_count=preview_count,
            edge_count=len(dag_export["edges"]),
            total_temp_bytes=session.engine.registry.total_bytes,
            final_preview_source="None",
            final_elapsed=0.0,
            rows_scanned_speculative=0,
            rows_scanned_direct=direct.rows_scanned,
            error="no final preview",
        )
        return row, dag_export
    row = ReplayRow(
        query_id=trace.query_id,
        shape=classify(dag_export),
        temp_table_count=len(temp_names),
        preview_count=preview_count,
        edge_count=len(dag_export["edges"]),
        total_temp_bytes=session.engine.registry.total_bytes,
        final_preview_source=final_preview["source"],
        final_elapsed=final_preview["elapsedMs"] / 1000.0,
        rows_scanned_speculative=final_preview["rowsScanned"],
        rows_scanned_direct=direct.rows_scanned,
    )
    return row, dag_export
