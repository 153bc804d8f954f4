"""Append-only JSON-lines log of vertex state transitions."""

from __future__ import annotations

import json
from pathlib import Path


class EventLog:
    """Structured event sink; file-backed when a path is given."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self.events: list[dict] = []

    def append(self, event: dict) -> None:
        self.events.append(event)
        if self.path is not None:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, separators=(",", ":")) + "\n")

    @staticmethod
    def read(path: str | Path) -> list[dict]:
        out = []
        with Path(path).open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    out.append(json.loads(line))
        return out

    def latest_statuses(self) -> dict[str, str]:
        """Vertex id -> last logged status; the crash-recovery view."""
        out: dict[str, str] = {}
        for event in self.events:
            vertex = event.get("vertex")
            status = event.get("status")
            if vertex is not None and status is not None:
                out[vertex] = status
        return out
