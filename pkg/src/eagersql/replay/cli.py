"""Replay command line: run a corpus, classify a graph export, summarize."""

from __future__ import annotations

import json
import sqlite3
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from eagersql.executor.adapter import SqliteAdapter
from eagersql.executor.engine import ResourceBudget
from eagersql.replay import datagen
from eagersql.replay.classify import classify as classify_export
from eagersql.replay.harness import ReplayRow, TickClock, replay_trace
from eagersql.replay.report import render_markdown, read_report, write_report, write_summary
from eagersql.replay.trace import make_trace
from eagersql.session.service import Session, SessionConfig
from eagersql.speculator.provider import HttpProvider, MockProvider


def load_corpus(corpus_dir: str | Path) -> tuple[list[tuple[str, str]], Path | None]:
    """Sorted (query id, text) pairs plus the rulebook path if present."""
    corpus_dir = Path(corpus_dir)
    queries = [
        (path.stem, path.read_text(encoding="utf-8"))
        for path in sorted(corpus_dir.glob("q*.sql"))
    ]
    if not queries:
        raise click.ClickException(f"no q*.sql files in {corpus_dir}")
    rulebook = corpus_dir / "rulebook.json"
    return queries, rulebook if rulebook.exists() else None


def _load_adapter_config(path: str | None) -> dict:
    config = {"db": "", "seed": datagen.DEFAULT_SEED, "factRows": datagen.DEFAULT_FACT_ROWS,
              "timeout": 0.5}
    if path:
        config.update(json.loads(Path(path).read_text(encoding="utf-8")))
    return config


def run_corpus(
    corpus_dir: str | Path,
    out_dir: str | Path,
    adapter_config: dict | None = None,
    provider_name: str = "mock",
    endpoint: str | None = None,
    parallel: int = 1,
    wall_clock: bool = False,
) -> list[ReplayRow]:
    """Replay every corpus query; write report.csv and dag exports."""
    out_dir = Path(out_dir)
    (out_dir / "dag").mkdir(parents=True, exist_ok=True)
    queries, rulebook = load_corpus(corpus_dir)
    config = adapter_config or _load_adapter_config(None)

    db_path = config.get("db") or str(out_dir / "replay.sqlite")
    prep = sqlite3.connect(db_path)
    datagen.populate(prep, seed=config["seed"], fact_rows=config["factRows"])
    prep.close()

    def make_provider():
        if provider_name == "remote":
            if not endpoint:
                raise click.ClickException("--provider remote requires an endpoint")
            return HttpProvider(endpoint)
        if rulebook is not None:
            return MockProvider.from_rulebook(str(rulebook))
        return MockProvider()

    def run_one(query_id: str, text: str) -> ReplayRow:
        conn = sqlite3.connect(db_path, check_same_thread=False)
        clock = None if wall_clock else TickClock()
        session = Session(
            SqliteAdapter(conn),
            make_provider(),
            SessionConfig(
                session_id=query_id,
                budget=ResourceBudget(per_statement_timeout=config["timeout"]),
            ),
            **({} if wall_clock else {"clock": clock}),
        )
        try:
            row, export = replay_trace(make_trace(query_id, text), session)
        except Exception as exc:  # per-query failures keep the corpus run going
            session.teardown()
            conn.close()
            return ReplayRow(query_id, "Linear", 0, 0, 0, 0, "None", 0.0, 0, 0,
                             error=str(exc))
        (out_dir / "dag" / f"{query_id}.json").write_text(
            json.dumps(export, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        (out_dir / "dag" / f"{query_id}.dot").write_text(
            session.dag.to_dot(), encoding="utf-8"
        )
        session.teardown()
        conn.close()
        return row

    if parallel > 1:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            rows = list(pool.map(lambda q: run_one(*q), queries))
    else:
        rows = [run_one(query_id, text) for query_id, text in queries]
    write_report(rows, out_dir)
    return rows


@click.group()
def main() -> None:
    """Benchmark harness for the speculative query pipeline."""


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--adapter", "adapter_cfg", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON config: db, seed, factRows, timeout")
@click.option("--provider", type=click.Choice(["mock", "remote"]), default="mock")
@click.option("--endpoint", default=None, help="remote provider URL")
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--parallel", default=1, show_default=True)
@click.option("--wall-clock", is_flag=True,
              help="measure real time instead of the deterministic clock")
def run(corpus, adapter_cfg, provider, endpoint, out, parallel, wall_clock) -> None:
    """Replay every corpus query and write report.csv plus dag exports."""
    rows = run_corpus(
        corpus, out,
        adapter_config=_load_adapter_config(adapter_cfg),
        provider_name=provider, endpoint=endpoint,
        parallel=parallel, wall_clock=wall_clock,
    )
    for row in sorted(rows, key=lambda r: r.query_id):
        click.echo(
            f"{row.query_id}: shape={row.shape} source={row.final_preview_source} "
            f"scanned={row.rows_scanned_speculative}/{row.rows_scanned_direct}"
        )


@main.command()
@click.argument("dag_json", type=click.Path(exists=True, dir_okay=False))
def classify(dag_json) -> None:
    """Print the shape label of an exported graph."""
    export = json.loads(Path(dag_json).read_text(encoding="utf-8"))
    click.echo(classify_export(export))


@main.command()
@click.argument("report_dir", type=click.Path(exists=True, file_okay=False))
def report(report_dir) -> None:
    """Summarize a report directory as CSV and Markdown."""
    write_summary(report_dir)
    click.echo(render_markdown(read_report(Path(report_dir) / "report.csv")))


if __name__ == "__main__":
    main()
