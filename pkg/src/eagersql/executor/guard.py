"""Safety guard: only session-scoped read/materialize/drop statements pass."""

from __future__ import annotations

import re
from dataclasses import dataclass

from eagersql.errors import ParseError
from eagersql.sqlcore.tokens import tokenize

SESSION_PREFIX = "spec_tmp_"

_FORBIDDEN = {
    "insert", "update", "delete", "alter", "grant", "revoke", "truncate",
    "replace", "merge", "attach", "detach", "pragma", "vacuum", "copy",
    "set", "into",
}

_CREATE = re.compile(
    r"^create\s+(?:temp|temporary)\s+table\s+([A-Za-z_][A-Za-z0-9_]*)\s+as\s+select\b",
    re.IGNORECASE,
)
_DROP = re.compile(
    r"^drop\s+table\s+(?:if\s+exists\s+)?([A-Za-z_][A-Za-z0-9_]*)\s*$",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class GuardDecision:
    allowed: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.allowed


def guard(statement: str, session_prefix: str = SESSION_PREFIX) -> GuardDecision:
    """Allow only SELECT, CREATE TEMP TABLE <session> AS SELECT, and DROP of
    session-owned temp tables. Anything unparseable is rejected outright."""
    text = statement.strip()
    if text.endswith(";"):
        text = text[:-1].rstrip()
    if not text:
        return GuardDecision(False, "empty statement")
    if ";" in text:
        return GuardDecision(False, "multiple statements")
    try:
        tokens = tokenize(text)
    except ParseError as exc:
        return GuardDecision(False, f"unparseable statement: {exc.message}")
    words = {t.value for t in tokens if t.kind == "kw"}
    bad = sorted(words & _FORBIDDEN)
    if bad:
        return GuardDecision(False, f"forbidden keyword: {bad[0]}")

    head = tokens[0].value.lower() if tokens else ""
    if head in ("select", "with"):
        return GuardDecision(True)
    if head == "create":
        match = _CREATE.match(text)
        if match is None:
            return GuardDecision(False, "only CREATE TEMP TABLE ... AS SELECT is allowed")
        if not match.group(1).lower().startswith(session_prefix):
            return GuardDecision(False, "temp table name outside the session namespace")
        return GuardDecision(True)
    if head == "drop":
        match = _DROP.match(text)
        if match is None:
            return GuardDecision(False, "only DROP TABLE <name> is allowed")
        if not match.group(1).lower().startswith(session_prefix):
            return GuardDecision(False, "refusing to drop a non-session table")
        return GuardDecision(True)
    return GuardDecision(False, f"statement verb not allowed: {head}")
