"""Execution engine: materialize temp tables, serve previews, warm scans.

Ties together the guard, the adapter, the temp-table registry, the plan
cache, and the subsumption rewriter. One engine per session; every temp
table it creates carries the session prefix, which is what the guard and
teardown rely on.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Callable

from typing import TYPE_CHECKING

from eagersql.errors import AdapterError, AdapterTimeout, GuardRejected

if TYPE_CHECKING:
    from eagersql.dag.model import DagVertex
from eagersql.executor.adapter import Adapter
from eagersql.executor.guard import SESSION_PREFIX, guard
from eagersql.executor.plancache import PlanCache
from eagersql.executor.registry import TempRegistry, TempTableRecord
from eagersql.sqlcore import ast
from eagersql.sqlcore.blocks import SelectBlock, project_aliases, replace_table_refs
from eagersql.sqlcore.render import render_select

Resolver = dict[str, "str | ast.SelectStmt"]

_HASH_MULTIPLIER = 2654435761  # Knuth multiplicative hashing constant


@dataclass
class ResourceBudget:
    max_temp_bytes: int = 1 << 30
    per_statement_timeout: float = 2.0
    sample_rate: float = 0.05
    preview_limit: int = 30

    def __post_init__(self) -> None:
        if not (0 < self.sample_rate <= 1):
            raise ValueError("sample_rate must be in (0, 1]")
        if self.preview_limit < 1:
            raise ValueError("preview_limit must be at least 1")


@dataclass
class ExecutionResult:
    columns: list[str]
    rows: list[tuple]
    rows_scanned: int
    elapsed: float
    approximate: bool = False
    source: str = "Direct"  # "Speculative" | "Direct"
    error: str | None = None


@dataclass
class ExecutionEngine:
    adapter: Adapter
    session_id: str = "s0"
    budget: ResourceBudget = field(default_factory=ResourceBudget)
    registry: TempRegistry = field(default_factory=TempRegistry)
    plan_cache: PlanCache = field(default_factory=PlanCache)
    clock: Callable[[], float] = time.monotonic
    sample_seed: int = 0
    on_event: Callable[[dict], None] | None = None

    _counter: int = 0
    _by_identity: dict[str, str] = field(default_factory=dict)

    # -- helpers ----------------------------------------------------------

    def _emit(self, **event) -> None:
        if self.on_event is not None:
            self.on_event({"ts": self.clock(), **event})

    def _next_temp_name(self) -> str:
        self._counter += 1
        return f"{SESSION_PREFIX}{self.session_id}_{self._counter}"

    def _substitute_deps(self, select: ast.SelectStmt, resolver: Resolver) -> ast.SelectStmt:
        def fn(table: ast.TableName) -> ast.TableLike | None:
            target = resolver.get(table.name)
            if target is None:
                return None
            alias = table.alias or table.name
            if isinstance(target, str):
                return ast.TableName(target, alias)
            return ast.DerivedTable(target, alias)

        return replace_table_refs(select, fn)

    def _scan_tables(self, select: ast.SelectStmt) -> tuple[str, ...]:
        names: list[str] = []
        for node in ast.walk(select):
            if isinstance(node, ast.TableName) and node.name not in names:
                names.append(node.name)
        return tuple(names)

    def _guarded_execute(
        self, sql: str, params: tuple = (), deadline: float | None = None,
        scan_tables: tuple[str, ...] = (),
    ):
        decision = guard(sql)
        if not decision:
            raise GuardRejected(decision.reason)
        return self.adapter.execute(sql, params, deadline=deadline, scan_tables=scan_tables)

    # -- temp tables ------------------------------------------------------

    def create_temp_table(
        self,
        vertex: "DagVertex",
        resolver: Resolver | None = None,
        identities: dict[str, str] | None = None,
    ) -> TempTableRecord | None:
        """Materialize a TempTable vertex; None when skipped (timeout/failure)."""
        resolver = resolver or {}
        block = vertex.block
        known = self._by_identity.get(vertex.identity)
        if known is not None:
            record = self.registry.by_name(known)
            if record is not None:
                vertex.temp_name = record.temp_name
                vertex.set_status("Created")
                vertex.size_bytes = record.size_bytes
                self._emit(vertex=vertex.id, status="Created", reused=True)
                return record

        from eagersql.dag.matching import find_rewrite

        triples = project_aliases(block)
        plan = find_rewrite(block, self.registry.newest_first(), identities)
        if plan is not None:
            base_select = plan[1].select
            for record in (plan[0].table,):
                self.registry.touch(record.temp_name, self.clock())
        else:
            base_select = block.select
        items = tuple(
            ast.SelectItem(item.expr, name)
            for item, (_, name, _) in zip(base_select.items, triples)
        )
        select = self._substitute_deps(replace(base_select, items=items), resolver)

        temp_name = self._next_temp_name()
        sql = f"CREATE TEMP TABLE {temp_name} AS {render_select(select)}"
        vertex.set_status("Running")
        self._emit(vertex=vertex.id, status="Running")
        try:
            self._guarded_execute(sql, deadline=self.budget.per_statement_timeout)
        except AdapterTimeout:
            vertex.set_status("TimedOut")
            self._emit(vertex=vertex.id, status="TimedOut")
            return None
        except (AdapterError, GuardRejected) as exc:
            vertex.set_status("Failed")
            self._emit(vertex=vertex.id, status="Failed", error=str(exc))
            return None

        now = self.clock()
        record = TempTableRecord(
            temp_name=temp_name,
            block=block,
            columns=tuple((key, name) for key, name, _ in triples),
            size_bytes=self.adapter.table_size(temp_name),
            created_at=now,
            last_used_at=now,
            source_identities=tuple(
                (name, (identities or {}).get(name, name))
                for name in block.sources
                if identities and name in identities
            ),
        )
        self.registry.add(record)
        self._by_identity[vertex.identity] = temp_name
        vertex.temp_name = temp_name
        vertex.set_status("Created")
        vertex.created_at = now
        vertex.size_bytes = record.size_bytes
        self._emit(vertex=vertex.id, status="Created", tempName=temp_name,
                   sizeBytes=record.size_bytes)
        self.evict()
        return record

    def evict(self) -> list[str]:
        evicted = self.registry.evict(self.budget.max_temp_bytes, self.drop_temp)
        for name in evicted:
            self._by_identity = {
                k: v for k, v in self._by_identity.items() if v != name
            }
            self._emit(tempName=name, status="Evicted")
        return evicted

    def drop_temp(self, name: str) -> None:
        self._guarded_execute(f"DROP TABLE {name}")

    # -- previews ---------------------------------------------------------

    def _sampled(self, select: ast.SelectStmt, scan_tables: tuple[str, ...]) -> ast.SelectStmt:
        """Replace the largest base source with a deterministic row sample."""
        candidates = [t for t in scan_tables if not t.startswith(SESSION_PREFIX)]
        if not candidates:
            candidates = list(scan_tables)
        if not candidates:
            return select
        largest = max(candidates, key=self.adapter.table_rows)
        threshold = int(self.budget.sample_rate * 10000)
        predicate = ast.BinOp(
            "<",
            ast.BinOp(
                "%",
                ast.BinOp(
                    "+",
                    ast.BinOp(
                        "*",
                        ast.ColumnRef(None, "rowid"),
                        ast.Literal(_HASH_MULTIPLIER, "num"),
                    ),
                    ast.Literal(self.sample_seed, "num"),
                ),
                ast.Literal(10000, "num"),
            ),
            ast.Literal(threshold, "num"),
        )
        sample = ast.SelectStmt(
            items=(ast.SelectItem(ast.Star()),),
            from_first=ast.TableName(largest),
            where=predicate,
        )

        def fn(table: ast.TableName) -> ast.TableLike | None:
            if table.name == largest:
                return ast.DerivedTable(sample, table.alias or table.name)
            return None

        return replace_table_refs(select, fn)

    def run_preview(
        self,
        block: SelectBlock,
        resolver: Resolver | None = None,
        identities: dict[str, str] | None = None,
    ) -> ExecutionResult:
        """Execute the cursor block with rewrite-over-temps and sampling fallback."""
        from eagersql.dag.matching import find_rewrite

        resolver = resolver or {}
        plan = find_rewrite(block, self.registry.newest_first(), identities)
        if plan is not None:
            select = plan[1].select
            source = "Speculative"
            self.registry.touch(plan[0].table.temp_name, self.clock())
        else:
            select = block.select
            source = "Direct"
        select = self._substitute_deps(select, resolver)
        scan_tables = self._scan_tables(select)
        if any(t.startswith(SESSION_PREFIX) for t in scan_tables):
            source = "Speculative"
        text, params = self.plan_cache.lookup(select)

        start = self.clock()
        try:
            batch = self._guarded_execute(
                text, tuple(params), deadline=self.budget.per_statement_timeout,
                scan_tables=scan_tables,
            )
            return ExecutionResult(
                batch.columns, batch.rows, batch.rows_scanned,
                self.clock() - start, approximate=False, source=source,
            )
        except AdapterTimeout:
            pass
        except (AdapterError, GuardRejected) as exc:
            return ExecutionResult([], [], 0, self.clock() - start,
                                   source=source, error=str(exc))

        sampled = self._sampled(select, scan_tables)
        text, params = self.plan_cache.lookup(sampled)
        try:
            batch = self._guarded_execute(
                text, tuple(params), deadline=self.budget.per_statement_timeout,
                scan_tables=scan_tables,
            )
            return ExecutionResult(
                batch.columns, batch.rows, batch.rows_scanned,
                self.clock() - start, approximate=True, source=source,
            )
        except (AdapterTimeout, AdapterError, GuardRejected) as exc:
            return ExecutionResult([], [], 0, self.clock() - start,
                                   source=source, error=str(exc))

    # -- warm scans and lifecycle -----------------------------------------

    def warm_scan(self, tables: list[str], columns: list[str]) -> None:
        """Best-effort column reads to pull data into engine caches."""
        catalog = self.adapter.catalog()
        for table in tables:
            if not catalog.has_table(table):
                continue
            wanted = [c for c in columns if c in catalog.columns(table)]
            if not wanted:
                continue
            expr = ", ".join(f"count({c})" for c in wanted)
            try:
                self._guarded_execute(f"SELECT {expr} FROM {table}")
            except Exception:
                pass

    def cancel_all(self) -> None:
        try:
            self.adapter.cancel()
        except Exception:
            pass
        self._emit(status="CancelAll")

    def teardown(self) -> None:
        self.cancel_all()
        for record in list(self.registry.records):
            try:
                self.drop_temp(record.temp_name)
            except Exception:
                pass
            self.registry.remove(record.temp_name)
        self._by_identity.clear()
        self._emit(status="Teardown")
