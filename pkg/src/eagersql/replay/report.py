"""Benchmark report: per-query CSV plus a Markdown summary with aggregates."""

from __future__ import annotations

import csv
import statistics
from pathlib import Path

from eagersql.replay.harness import ReplayRow

NUMERIC = (
    "tempTableCount", "previewCount", "edgeCount", "totalTempBytes",
    "finalElapsed", "rowsScannedSpeculative", "rowsScannedDirect",
)


def write_report(rows: list[ReplayRow], out_dir: str | Path) -> Path:
    """Deterministic report.csv: header, then rows sorted by queryId."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "report.csv"
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ReplayRow.FIELDS)
        for row in sorted(rows, key=lambda r: r.query_id):
            writer.writerow(row.as_csv_row())
    return path


def read_report(path: str | Path) -> list[dict]:
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def aggregates(records: list[dict]) -> dict[str, dict[str, float]]:
    """median/mean/max per numeric column; recomputable from the rows."""
    out: dict[str, dict[str, float]] = {}
    for column in NUMERIC:
        values = [float(r[column]) for r in records]
        if not values:
            continue
        out[column] = {
            "median": statistics.median(values),
            "mean": statistics.fmean(values),
            "max": max(values),
        }
    return out


def render_markdown(records: list[dict]) -> str:
    lines = ["# Replay benchmark", "", "## Per query", ""]
    header = list(ReplayRow.FIELDS)
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "---|" * len(header))
    for record in records:
        lines.append("| " + " | ".join(record.get(h, "") for h in header) + " |")
    lines += ["", "## Aggregates", ""]
    lines.append("| metric | median | mean | max |")
    lines.append("|---|---|---|---|")
    for column, stats in aggregates(records).items():
        lines.append(
            f"| {column} | {stats['median']:g} | {stats['mean']:g} | {stats['max']:g} |"
        )
    shapes = sorted({r["shape"] for r in records})
    lines += ["", "## Shapes", ""]
    for shape in shapes:
        count = sum(1 for r in records if r["shape"] == shape)
        lines.append(f"- {shape}: {count}")
    return "\n".join(lines) + "\n"


def write_summary(report_dir: str | Path) -> tuple[Path, Path]:
    """Emit summary.csv (aggregates) and summary.md next to report.csv."""
    report_dir = Path(report_dir)
    records = read_report(report_dir / "report.csv")
    stats = aggregates(records)
    csv_path = report_dir / "summary.csv"
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["metric", "median", "mean", "max"])
        for column, values in stats.items():
            writer.writerow(
                [column, f"{values['median']:g}", f"{values['mean']:g}", f"{values['max']:g}"]
            )
    md_path = report_dir / "summary.md"
    md_path.write_text(render_markdown(records), encoding="utf-8")
    return csv_path, md_path
