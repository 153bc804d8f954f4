"""Per-session pipeline: debug -> over-project -> evolve DAG -> execute.

A Session owns one execution engine, one history store, and one DAG. Each
snapshot runs the whole pipeline synchronously and returns the ordered
server messages (diff, status, preview, trailing status); transports layer
latest-wins debouncing on top.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from eagersql.dag.build import _identities, evolve_dag
from eagersql.dag.model import SpecDag
from eagersql.dag.scheduling import schedule
from eagersql.executor.adapter import Adapter
from eagersql.executor.engine import ExecutionEngine, ExecutionResult, ResourceBudget
from eagersql.session import messages as msg
from eagersql.session.eventlog import EventLog
from eagersql.speculator.autocomplete import autocomplete
from eagersql.speculator.debug import apply_cached_patch, debug, validate
from eagersql.speculator.history import HistoryStore
from eagersql.speculator.overproject import over_project
from eagersql.speculator.provider import Provider
from eagersql.speculator.types import (
    DebugOutcome,
    DiffPatch,
    PatchMiss,
    ProviderConfig,
    QuerySnapshot,
)
from eagersql.errors import ParseError, SemanticError
from eagersql.sqlcore import canonicalize, decompose
from eagersql.sqlcore.render import render_select


@dataclass
class SessionConfig:
    session_id: str = "s0"
    dialect: str = "generic"
    provider_cfg: ProviderConfig = field(default_factory=ProviderConfig)
    budget: ResourceBudget = field(default_factory=ResourceBudget)


class Session:
    """One user's speculative querying session."""

    def __init__(
        self,
        adapter: Adapter,
        provider: Provider,
        config: SessionConfig | None = None,
        catalog=None,
        event_log: EventLog | None = None,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.config = config or SessionConfig()
        self.provider = provider
        self.event_log = event_log or EventLog()
        self.engine = ExecutionEngine(
            adapter,
            session_id=self.config.session_id,
            budget=self.config.budget,
            clock=clock,
            on_event=self.event_log.append,
        )
        self.catalog = catalog if catalog is not None else adapter.catalog()
        self.history = HistoryStore()
        self.dag = SpecDag()
        self.last_patch = DiffPatch()
        self.last_key: tuple[str, int] | None = None
        self.last_preview: ExecutionResult | None = None
        self.closed = False

    # -- message entry point ----------------------------------------------

    def ingest(self, message: dict) -> list[dict]:
        """Handle one client message; returns the server messages in order."""
        if self.closed:
            return [msg.error_message("session", "session closed")]
        try:
            kind = message.get("type") if isinstance(message, dict) else None
            if kind == "close":
                self.teardown()
                return []
            if kind != "snapshot":
                raise msg.ProtocolError(f"unknown message type: {kind!r}")
            snapshot = msg.snapshot_from(message)
        except msg.ProtocolError as exc:
            return [msg.error_message("protocol", str(exc))]
        return self.pipeline(snapshot)

    # -- pipeline ----------------------------------------------------------

    def _debug(self, snapshot: QuerySnapshot) -> tuple[DebugOutcome, int]:
        """Validated query plus the cursor offset within the debugged text."""
        try:
            query = validate(snapshot.text, self.catalog, snapshot.dialect)
            return DebugOutcome(query, DiffPatch(), 0, True, snapshot.text), (
                snapshot.cursor_offset()
            )
        except (ParseError, SemanticError):
            pass
        if not self.last_patch.empty:
            try:
                query, patched, cursor = apply_cached_patch(
                    snapshot, self.last_patch, self.catalog
                )
                outcome = DebugOutcome(query, self.last_patch, 0, True, patched)
                return outcome, cursor
            except PatchMiss:
                pass
        outcome = debug(
            snapshot, self.catalog, self.history, self.provider,
            self.config.provider_cfg,
        )
        cursor = snapshot.cursor_offset()
        if outcome.succeeded:
            try:
                _, cursor = outcome.patch.apply(snapshot.text, cursor)
            except PatchMiss:
                cursor = len(outcome.text)
        return outcome, cursor if cursor is not None else len(outcome.text)

    def _dag_summary(self) -> dict:
        graph = self.dag.to_json()
        by_status: dict[str, int] = {}
        for vertex in graph["vertices"]:
            by_status[vertex["status"]] = by_status.get(vertex["status"], 0) + 1
        return {
            "vertexCount": len(graph["vertices"]),
            "edgeCount": len(graph["edges"]),
            "byStatus": by_status,
            "tempBytes": self.engine.registry.total_bytes,
            "graph": graph,
        }

    def pipeline(self, snapshot: QuerySnapshot) -> list[dict]:
        seq = snapshot.seq
        immediate = snapshot.trigger == "double_enter"
        if immediate:
            self.engine.cancel_all()

        outcome, cursor = self._debug(snapshot)
        if not outcome.succeeded:
            self.event_log.append({"seq": seq, "status": "DebugFailed"})
            return [msg.status_message(self._dag_summary(), seq, "awaiting valid query")]
        self.last_patch = outcome.patch
        self.history.add(outcome.text)

        canonical = render_select(canonicalize(outcome.query).root)
        key = (canonical, cursor)
        if key == self.last_key and not immediate and self.last_preview is not None:
            return [msg.status_message(self._dag_summary(), seq, "unchanged")]
        self.last_key = key

        completion = ""
        if not immediate:
            completion = autocomplete(
                outcome.text, cursor, self.catalog, self.history, self.provider,
                model=self.config.provider_cfg.small_model,
                neighbors=self.config.provider_cfg.history_neighbors,
                dialect=snapshot.dialect,
            )
        superset = over_project(
            outcome.query, completion, self.catalog, cursor, basis=outcome
        )
        evolve_dag(
            self.dag, superset, cursor, self.engine.registry,
            preview_limit=self.config.budget.preview_limit,
        )
        out = [
            msg.diff_message(outcome.patch, superset.over_projected, seq),
            msg.status_message(self._dag_summary(), seq),
        ]

        blocks = decompose(canonicalize(superset.ast))
        identities = _identities(blocks)
        name_of = {
            identities[b.name]: b.name for b in blocks if not b.correlated
        }
        resolver: dict = {}
        for vertex in self.dag.vertices.values():
            name = name_of.get(vertex.identity)
            if name is not None and vertex.temp_name is not None:
                resolver[name] = vertex.temp_name

        mode = "Immediate" if immediate else "Speculative"
        for vid in schedule(self.dag, mode):
            vertex = self.dag.vertices[vid]
            if vertex.kind == "Preview":
                result = self.engine.run_preview(vertex.block, resolver, identities)
                vertex.set_status("Failed" if result.error else "Created")
                self.event_log.append(
                    {"seq": seq, "vertex": vid, "status": vertex.status,
                     "source": result.source}
                )
                self.last_preview = result
                out.append(msg.preview_message(result, seq))
                continue
            record = self.engine.create_temp_table(vertex, resolver, identities)
            name = name_of.get(vertex.identity)
            if name is not None:
                if record is not None:
                    resolver[name] = record.temp_name
                else:
                    # Materialization failed: inline the block for dependents.
                    block = next(b for b in blocks if b.name == name)
                    resolver[name] = self.engine._substitute_deps(
                        block.select, dict(resolver)
                    )
        out.append(msg.status_message(self._dag_summary(), seq))
        return out

    # -- lifecycle ---------------------------------------------------------

    def teardown(self) -> None:
        """Idempotent: cancel in-flight work, drop every session temp table."""
        if self.closed:
            return
        self.engine.teardown()
        self.dag = SpecDag()
        self.closed = True
