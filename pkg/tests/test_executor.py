"""Guard, adapters, registry eviction, plan cache, engine behaviors."""

from __future__ import annotations

import random
import sqlite3

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eagersql.dag.model import DagVertex
from eagersql.executor import (
    ExecutionEngine,
    MockAdapter,
    PlanCache,
    ResourceBudget,
    SqliteAdapter,
    TempRegistry,
    TempTableRecord,
    guard,
)
from eagersql.sqlcore import canonicalize, decompose, parse, resolve
from eagersql.sqlcore.blocks import strip_limit_order
from tests.conftest import SALES_CATALOG, populate_sales


def blk(text: str):
    return decompose(canonicalize(resolve(parse(text), SALES_CATALOG)))[-1]


def vertex_for(text: str, identity: str) -> DagVertex:
    return DagVertex(identity, "TempTable", strip_limit_order(blk(text)), identity)


@pytest.fixture
def engine():
    conn = sqlite3.connect(":memory:")
    populate_sales(conn, 1500)
    eng = ExecutionEngine(SqliteAdapter(conn))
    yield eng
    conn.close()


class TestGuard:
    @pytest.mark.parametrize(
        "sql",
        [
            "SELECT 1",
            "SELECT item FROM sales WHERE price > 5",
            "WITH x AS (SELECT item FROM sales) SELECT * FROM x",
            "CREATE TEMP TABLE spec_tmp_s0_1 AS SELECT item FROM sales",
            "CREATE TEMPORARY TABLE spec_tmp_abc AS SELECT 1",
            "DROP TABLE spec_tmp_s0_1",
        ],
    )
    def test_allowed(self, sql):
        assert guard(sql)

    @pytest.mark.parametrize(
        "sql",
        [
            "UPDATE sales SET price = 0",
            "DELETE FROM sales",
            "INSERT INTO sales VALUES (1)",
            "DROP TABLE store_sales",
            "DROP TABLE sales",
            "CREATE TEMP TABLE evil AS SELECT * FROM sales",
            "CREATE TABLE t AS SELECT 1",
            "SELECT 1; DROP TABLE sales",
            "PRAGMA writable_schema = 1",
            "",
            "GRANT ALL ON sales TO x",
            "\x00garbage\x07",
        ],
    )
    def test_rejected(self, sql):
        decision = guard(sql)
        assert not decision
        assert decision.reason


class TestRegistry:
    def rec(self, name: str, size: int, used: float) -> TempTableRecord:
        block = strip_limit_order(blk("SELECT item FROM sales"))
        return TempTableRecord(name, block, (("sales.item", "item"),), size, 0.0, used)

    def test_unbounded_budget_evicts_nothing(self):
        reg = TempRegistry()
        reg.records.append(self.rec("spec_tmp_a", 100, 1))
        assert reg.evict(1 << 40) == []

    def test_three_tables_budget_150(self):
        reg = TempRegistry()
        for i, name in enumerate(["spec_tmp_a", "spec_tmp_b", "spec_tmp_c"]):
            reg.records.append(self.rec(name, 100, float(i)))
        assert reg.evict(150) == ["spec_tmp_a", "spec_tmp_b"]
        assert reg.total_bytes == 100

    def test_dedup_by_definition(self):
        reg = TempRegistry()
        first = reg.add(self.rec("spec_tmp_a", 100, 1))
        second = reg.add(self.rec("spec_tmp_b", 100, 2))
        assert second is first
        assert len(reg.records) == 1

    @settings(max_examples=50, deadline=None)
    @given(
        sizes=st.lists(st.integers(1, 100), min_size=1, max_size=8),
        touches=st.lists(st.tuples(st.integers(0, 7), st.floats(1, 100)), max_size=10),
        budget=st.integers(1, 400),
    )
    def test_matches_reference_lru_simulation(self, sizes, touches, budget):
        reg = TempRegistry()
        sim: list[tuple[str, int, float]] = []
        for i, size in enumerate(sizes):
            rec = self.rec(f"spec_tmp_{i}", size, 0.0)
            # Bypass definition dedup: every record stands alone here.
            reg.records.append(rec)
            sim.append((rec.temp_name, size, 0.0))
        for index, when in touches:
            if index < len(sizes):
                reg.touch(f"spec_tmp_{index}", when)
                sim = [
                    (n, s, max(u, when) if n == f"spec_tmp_{index}" else u)
                    for n, s, u in sim
                ]
        expected: list[str] = []
        while sum(s for _, s, _ in sim) > budget and sim:
            victim = min(range(len(sim)), key=lambda i: (sim[i][2], i))
            expected.append(sim.pop(victim)[0])
        assert reg.evict(budget) == expected


class TestPlanCache:
    def test_structural_hit_on_second_variant(self):
        cache = PlanCache()
        cache.lookup(blk("SELECT item FROM sales WHERE quantity > 10").select)
        cache.lookup(blk("SELECT item FROM sales WHERE quantity > 1").select)
        assert (len(cache), cache.hits, cache.misses) == (1, 1, 1)

    def test_distinct_structures_get_distinct_entries(self):
        cache = PlanCache()
        cache.lookup(blk("SELECT item FROM sales WHERE quantity > 10").select)
        cache.lookup(blk("SELECT price FROM sales WHERE quantity > 10").select)
        assert len(cache) == 2

    def test_hundred_variants_one_entry(self):
        cache = PlanCache()
        for i in range(100):
            cache.lookup(blk(f"SELECT item FROM sales WHERE quantity > {i}").select)
        assert (len(cache), cache.hits) == (1, 99)

    def test_bound_parameters_round_trip(self, engine):
        cache = PlanCache()
        text, params = cache.lookup(blk("SELECT item FROM sales WHERE quantity > 95").select)
        rows = engine.adapter.execute(text, tuple(params)).rows
        direct = engine.adapter.execute("SELECT item FROM sales WHERE quantity > 95").rows
        assert rows == direct


class TestCreateTempTable:
    def test_success_registers_and_sizes(self, engine):
        vertex = vertex_for("SELECT item, quantity FROM sales WHERE price > 5", "v1")
        record = engine.create_temp_table(vertex)
        assert vertex.status == "Created"
        assert record is not None and record.size_bytes > 0
        assert record.temp_name.startswith("spec_tmp_s0_")
        assert engine.registry.by_name(record.temp_name) is record

    def test_timeout_skips_registration(self):
        adapter = MockAdapter(latencies={"CREATE TEMP TABLE": 10.0})
        engine = ExecutionEngine(adapter, budget=ResourceBudget(per_statement_timeout=0.1))
        vertex = vertex_for("SELECT item FROM sales", "v1")
        assert engine.create_temp_table(vertex) is None
        assert vertex.status == "TimedOut"
        assert engine.registry.records == []

    def test_engine_error_marks_failed(self, engine):
        vertex = vertex_for("SELECT item FROM sales", "v1")
        vertex.block = strip_limit_order(
            decompose(canonicalize(resolve(parse("SELECT nope FROM missing"),
                                          type(SALES_CATALOG)({"missing": ["nope"]}))))[-1]
        )
        assert engine.create_temp_table(vertex) is None
        assert vertex.status == "Failed"

    def test_identical_identity_reuses_record(self, engine):
        first = vertex_for("SELECT item FROM sales", "same")
        second = vertex_for("SELECT item FROM sales", "same")
        record = engine.create_temp_table(first)
        calls_before = len(engine.adapter.statements)
        reused = engine.create_temp_table(second)
        assert reused is record
        assert len(engine.adapter.statements) == calls_before
        assert second.temp_name == first.temp_name


class TestRunPreview:
    def test_speculative_over_created_table(self, engine):
        vertex = vertex_for("SELECT item, quantity FROM sales WHERE price > 5", "v1")
        engine.create_temp_table(vertex)
        result = engine.run_preview(
            blk("SELECT item FROM sales WHERE price > 5 AND quantity > 50 LIMIT 30")
        )
        assert result.source == "Speculative"
        assert len(result.rows) <= 30
        assert not result.approximate

    def test_direct_when_nothing_matches(self, engine):
        result = engine.run_preview(blk("SELECT year FROM sales LIMIT 30"))
        assert result.source == "Direct"
        assert result.rows_scanned == 1500

    def test_empty_result_is_exact(self, engine):
        result = engine.run_preview(blk("SELECT item FROM sales WHERE price < 0 LIMIT 30"))
        assert result.rows == []
        assert not result.approximate and result.error is None

    def test_timeout_falls_back_to_sampling(self):
        adapter = MockAdapter(
            latencies={"rowid": 0.0, "sales": 10.0},
            results={"rowid": (["item"], [("apple",)])},
            row_counts={"sales": 1000},
        )
        engine = ExecutionEngine(adapter, budget=ResourceBudget(per_statement_timeout=0.1))
        result = engine.run_preview(blk("SELECT item FROM sales LIMIT 30"))
        assert result.approximate
        assert result.rows == [("apple",)]
        sampled_sql = adapter.statements[-1]
        assert "rowid" in sampled_sql  # literals bind as parameters
        from eagersql.sqlcore.render import render_select

        rendered = render_select(engine._sampled(blk("SELECT item FROM sales").select, ("sales",)))
        assert "% 10000 < 500" in rendered  # 5% deterministic row filter

    def test_double_timeout_reports_error(self):
        adapter = MockAdapter(latencies={"sales": 10.0})
        engine = ExecutionEngine(adapter, budget=ResourceBudget(per_statement_timeout=0.1))
        result = engine.run_preview(blk("SELECT item FROM sales LIMIT 30"))
        assert result.error is not None

    def test_sampler_is_deterministic(self, engine):
        block = blk("SELECT item FROM sales LIMIT 30")
        select = engine._sampled(block.select, ("sales",))
        again = engine._sampled(block.select, ("sales",))
        assert select == again


class TestLifecycle:
    def test_cancel_all_signals_adapter(self):
        adapter = MockAdapter()
        engine = ExecutionEngine(adapter)
        engine.cancel_all()
        assert adapter.cancelled == 1

    def test_teardown_drops_all_session_tables(self, engine):
        engine.create_temp_table(vertex_for("SELECT item FROM sales", "v1"))
        engine.create_temp_table(vertex_for("SELECT price FROM sales", "v2"))
        names = [r.temp_name for r in engine.registry.records]
        engine.teardown()
        assert engine.registry.records == []
        for name in names:
            with pytest.raises(sqlite3.OperationalError):
                engine.adapter.conn.execute(f"SELECT * FROM {name}")

    def test_sessions_are_namespaced(self):
        a = ExecutionEngine(MockAdapter(), session_id="a")
        b = ExecutionEngine(MockAdapter(), session_id="b")
        assert a._next_temp_name().startswith("spec_tmp_a_")
        assert b._next_temp_name().startswith("spec_tmp_b_")

    def test_eviction_during_creation(self):
        conn = sqlite3.connect(":memory:")
        populate_sales(conn, 1500)
        engine = ExecutionEngine(
            SqliteAdapter(conn), budget=ResourceBudget(max_temp_bytes=30000)
        )
        engine.create_temp_table(vertex_for("SELECT item, price FROM sales", "v1"))
        engine.create_temp_table(vertex_for("SELECT item, quantity FROM sales", "v2"))
        assert engine.registry.total_bytes <= 30000
        conn.close()


class TestWarmScan:
    def test_noop_on_empty_columns(self, engine):
        before = len(engine.adapter.statements)
        engine.warm_scan(["sales"], [])
        assert len(engine.adapter.statements) == before

    def test_unknown_column_filtered(self, engine):
        before = len(engine.adapter.statements)
        engine.warm_scan(["sales"], ["bogus"])
        assert len(engine.adapter.statements) == before

    def test_issues_column_reads(self, engine):
        engine.warm_scan(["sales"], ["item", "price"])
        assert any("count(item)" in s for s in engine.adapter.statements)
