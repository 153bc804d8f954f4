"""Reveal traces: simulate a user typing a query by uncovering its last
lines one at a time."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RevealTrace:
    """query_id plus the snapshot texts fed to the pipeline in order.

    The last snapshot is always the complete query; snapshot i+1 extends
    snapshot i by exactly one line.
    """

    query_id: str
    snapshots: tuple[str, ...]


def make_trace(query_id: str, text: str, k: int = 20) -> RevealTrace:
    """Hide the last k lines, then reveal them one at a time.

    A query with m >= k lines yields k+1 snapshots; with m < k lines every
    line is revealed, yielding m+1 snapshots (the first being empty).
    """
    text = text.rstrip("\n")
    lines = text.split("\n")
    hidden = min(k, len(lines))
    base = lines[: len(lines) - hidden]
    snapshots = []
    for reveal in range(hidden + 1):
        snapshots.append("\n".join(base + lines[len(base): len(base) + reveal]))
    return RevealTrace(query_id, tuple(snapshots))
