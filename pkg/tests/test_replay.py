"""Reveal traces, shape classification, data generation, harness, reports."""

from __future__ import annotations

import json
import sqlite3
from pathlib import Path

import pytest
from click.testing import CliRunner

from eagersql.executor.adapter import SqliteAdapter
from eagersql.replay import datagen
from eagersql.replay.classify import classify
from eagersql.replay.cli import main as cli_main, run_corpus
from eagersql.replay.harness import TickClock, replay_trace
from eagersql.replay.report import aggregates, read_report, render_markdown, write_report
from eagersql.replay.trace import make_trace
from eagersql.session.service import Session, SessionConfig
from eagersql.speculator.provider import MockProvider

CORPUS = Path(__file__).resolve().parents[1] / "src/eagersql/replay/corpus"


def small_session(query_id: str = "t") -> Session:
    conn = sqlite3.connect(":memory:", check_same_thread=False)
    datagen.populate(conn, fact_rows=2000)
    return Session(
        SqliteAdapter(conn), MockProvider(),
        SessionConfig(session_id=query_id), clock=TickClock(),
    )


class TestMakeTrace:
    def test_39_line_query_yields_21_snapshots(self):
        text = "\n".join(f"-- line {i}" for i in range(39))
        assert len(make_trace("q", text).snapshots) == 21

    def test_one_line_query_yields_2_snapshots(self):
        trace = make_trace("q", "SELECT 1")
        assert trace.snapshots == ("", "SELECT 1")

    def test_final_snapshot_is_the_input(self):
        text = (CORPUS / "q04.sql").read_text(encoding="utf-8").rstrip("\n")
        assert make_trace("q04", text).snapshots[-1] == text

    def test_each_snapshot_extends_by_one_line(self):
        text = "\n".join(f"line{i}" for i in range(8))
        trace = make_trace("q", text, k=20)
        assert len(trace.snapshots) == 9
        for a, b in zip(trace.snapshots, trace.snapshots[1:]):
            a_lines = a.split("\n") if a else []
            assert b.split("\n")[: len(a_lines)] == a_lines
            assert len(b.split("\n")) == len(a_lines) + 1


def export(edges: list[tuple[str, str]], previews: tuple[str, ...] = ()) -> dict:
    ids = {v for e in edges for v in e} | set(previews)
    return {
        "vertices": [
            {"id": v, "kind": "Preview" if v in previews else "TempTable"}
            for v in sorted(ids)
        ],
        "edges": [{"from": a, "to": b, "kind": "Dependency"} for a, b in edges],
    }


class TestClassify:
    # Hand-labeled fixtures spanning the three shapes.
    CASES = [
        ([("a", "b"), ("b", "c")], (), "Linear"),
        ([("a", "c"), ("b", "c")], (), "Mesh"),
        ([("a", "b"), ("a", "c")], (), "Tree"),
        ([], (), "Linear"),
        ([("a", "b")], (), "Linear"),
        ([("a", "b"), ("a", "c"), ("c", "d")], (), "Tree"),
        ([("a", "b"), ("b", "c"), ("a", "c")], (), "Mesh"),
        ([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")], (), "Linear"),
        ([("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")], (), "Mesh"),
        ([("a", "p"), ("b", "p")], ("p",), "Linear"),  # preview edges ignored
    ]

    @pytest.mark.parametrize("edges,previews,label", CASES)
    def test_hand_labels(self, edges, previews, label):
        assert classify(export(edges, previews)) == label


class TestDatagen:
    def test_row_counts(self):
        conn = sqlite3.connect(":memory:")
        datagen.populate(conn, fact_rows=5000)
        count = lambda t: conn.execute(f"SELECT count(*) FROM {t}").fetchone()[0]
        assert count("store_sales") == 5000
        assert count("date_dim") == datagen.N_DATES
        assert count("store") == datagen.N_STORES
        assert count("item") == datagen.N_ITEMS

    def test_same_seed_same_data(self):
        def digest() -> list:
            conn = sqlite3.connect(":memory:")
            datagen.populate(conn, seed=11, fact_rows=500)
            return conn.execute(
                "SELECT sum(ss_quantity), round(sum(ss_sales_price), 2) FROM store_sales"
            ).fetchone()

        assert digest() == digest()

    def test_populate_is_idempotent(self):
        conn = sqlite3.connect(":memory:")
        datagen.populate(conn, fact_rows=100)
        datagen.populate(conn, fact_rows=100)
        assert conn.execute("SELECT count(*) FROM store_sales").fetchone()[0] == 100


class TestHarness:
    def test_temp_vertex_count_is_monotonic(self):
        session = small_session()
        trace = make_trace("q01", (CORPUS / "q01.sql").read_text(encoding="utf-8"))
        counts = []
        for index, text in enumerate(trace.snapshots):
            lines = text.split("\n")
            session.ingest({
                "type": "snapshot", "text": text,
                "cursor": [len(lines) - 1, len(lines[-1])],
                "trigger": "poll", "seq": index + 1,
            })
            counts.append(
                sum(1 for v in session.dag.vertices.values() if v.kind == "TempTable")
            )
        assert counts == sorted(counts)
        session.teardown()

    def test_linear_refinement_scans_fewer_rows(self):
        session = small_session()
        trace = make_trace("q01", (CORPUS / "q01.sql").read_text(encoding="utf-8"))
        row, dag_export = replay_trace(trace, session)
        assert row.final_preview_source == "Speculative"
        assert row.rows_scanned_speculative < row.rows_scanned_direct
        assert row.shape == "Linear"
        assert dag_export["vertices"]
        session.teardown()

    def test_all_avg_query_runs_direct(self):
        session = small_session()
        trace = make_trace("q11", (CORPUS / "q11.sql").read_text(encoding="utf-8"))
        row, _ = replay_trace(trace, session)
        assert row.final_preview_source == "Direct"
        session.teardown()


class TestReport:
    def run_small(self, out: Path) -> list:
        return run_corpus(
            CORPUS, out,
            adapter_config={"db": "", "seed": 7, "factRows": 2000, "timeout": 2.0},
        )

    def test_report_round_trip_and_aggregates(self, tmp_path):
        rows = self.run_small(tmp_path)
        records = read_report(tmp_path / "report.csv")
        assert len(records) == 12
        stats = aggregates(records)
        directs = sorted(float(r["rowsScannedDirect"]) for r in records)
        assert stats["rowsScannedDirect"]["max"] == directs[-1]
        mean = sum(directs) / len(directs)
        assert stats["rowsScannedDirect"]["mean"] == pytest.approx(mean)
        markdown = render_markdown(records)
        assert "q07" in markdown and "Aggregates" in markdown
        shapes = [r.shape for r in rows]
        for label in ("Linear", "Tree", "Mesh"):
            assert shapes.count(label) >= 3

    def test_two_runs_byte_identical(self, tmp_path):
        self.run_small(tmp_path / "a")
        self.run_small(tmp_path / "b")
        first = (tmp_path / "a" / "report.csv").read_bytes()
        second = (tmp_path / "b" / "report.csv").read_bytes()
        assert first == second

    def test_dag_exports_written(self, tmp_path):
        self.run_small(tmp_path)
        exported = json.loads((tmp_path / "dag" / "q04.json").read_text())
        assert classify(exported) == "Tree"
        assert (tmp_path / "dag" / "q04.dot").read_text().startswith("digraph")


class TestCli:
    def test_run_classify_report_commands(self, tmp_path):
        runner = CliRunner()
        cfg = tmp_path / "adapter.json"
        cfg.write_text(json.dumps({"factRows": 2000, "timeout": 2.0}))
        out = tmp_path / "out"
        result = runner.invoke(cli_main, [
            "run", "--corpus", str(CORPUS), "--adapter", str(cfg),
            "--provider", "mock", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        assert "q01" in result.output

        result = runner.invoke(cli_main, ["classify", str(out / "dag" / "q07.json")])
        assert result.exit_code == 0
        assert result.output.strip() == "Mesh"

        result = runner.invoke(cli_main, ["report", str(out)])
        assert result.exit_code == 0
        assert (out / "summary.csv").exists() and (out / "summary.md").exists()
