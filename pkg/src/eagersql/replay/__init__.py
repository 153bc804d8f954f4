"""Deterministic benchmark harness: reveal queries line by line, drive the
pipeline, collect metrics, and classify the resulting table graphs."""

from eagersql.replay.trace import RevealTrace, make_trace
from eagersql.replay.classify import classify
from eagersql.replay.harness import ReplayRow, replay_trace
from eagersql.replay.report import render_markdown, write_report

__all__ = [
    "RevealTrace",
    "make_trace",
    "classify",
    "ReplayRow",
    "replay_trace",
    "write_report",
    "render_markdown",
]
