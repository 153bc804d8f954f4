"""Newline-delimited JSON wire messages.

Client -> server: {"type": "snapshot", "text", "cursor": [line, col],
"trigger": "poll"|"enter"|"double_enter", "seq"} or {"type": "close"}.
Server -> client: diff / preview / status / error; every payload carries
basisSeq, the snapshot seq it was computed from, so clients can drop stale
messages.
"""

from __future__ import annotations

import json

from eagersql.executor.engine import ExecutionResult
from eagersql.speculator.types import DiffPatch, QuerySnapshot


class ProtocolError(Exception):
    pass


def encode(message: dict) -> bytes:
    return (json.dumps(message, separators=(",", ":")) + "\n").encode("utf-8")


def decode(line: bytes | str) -> dict:
    try:
        message = json.loads(line)
    except (ValueError, TypeError) as exc:
        raise ProtocolError(f"malformed message: {exc}") from exc
    if not isinstance(message, dict) or "type" not in message:
        raise ProtocolError("message must be an object with a type")
    return message


def snapshot_from(message: dict) -> QuerySnapshot:
    try:
        cursor = message.get("cursor", [0, 0])
        return QuerySnapshot(
            text=str(message["text"]),
            cursor=(int(cursor[0]), int(cursor[1])),
            dialect=str(message.get("dialect", "generic")),
            trigger=str(message.get("trigger", "poll")),
            seq=int(message.get("seq", 0)),
        )
    except (KeyError, IndexError, ValueError, TypeError) as exc:
        raise ProtocolError(f"bad snapshot fields: {exc}") from exc


def diff_message(
    patch: DiffPatch, over_projected: tuple[tuple[str, str], ...], basis_seq: int
) -> dict:
    return {
        "type": "diff",
        "hunks": [{"old": h.old, "new": h.new} for h in patch.hunks],
        "overProjected": [list(pair) for pair in over_projected],
        "basisSeq": basis_seq,
    }


def preview_message(result: ExecutionResult, basis_seq: int) -> dict:
    return {
        "type": "preview",
        "columns": result.columns,
        "rows": [list(r) for r in result.rows],
        "approximate": result.approximate,
        "source": result.source,
        "elapsedMs": round(result.elapsed * 1000, 3),
        "rowsScanned": result.rows_scanned,
        "basisSeq": basis_seq,
    }


def status_message(dag_summary: dict, basis_seq: int, note: str | None = None) -> dict:
    message = {"type": "status", "dagSummary": dag_summary, "basisSeq": basis_seq}
    if note is not None:
        message["note"] = note
    return message


def error_message(stage: str, text: str, basis_seq: int | None = None) -> dict:
    message = {"type": "error", "stage": stage, "message": text}
    if basis_seq is not None:
        message["basisSeq"] = basis_seq
    return message
