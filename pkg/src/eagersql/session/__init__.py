"""Session lifecycle, pipeline orchestration, and the wire protocol."""

from eagersql.session.messages import (
    decode,
    diff_message,
    encode,
    error_message,
    preview_message,
    status_message,
)
from eagersql.session.service import Session, SessionConfig
from eagersql.session.eventlog import EventLog

__all__ = [
    "Session",
    "SessionConfig",
    "EventLog",
    "encode",
    "decode",
    "diff_message",
    "preview_message",
    "status_message",
    "error_message",
]
