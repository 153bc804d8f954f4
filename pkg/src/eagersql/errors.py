"""Exception types shared across the package."""

from __future__ import annotations


class EagerSqlError(Exception):
    """Base class for all package errors."""


class ParseError(EagerSqlError):
    """Raised when query text cannot be tokenized or parsed."""

    def __init__(self, message: str, position: int, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.position = position
        self.line = line
        self.column = column


class SemanticError(EagerSqlError):
    """Raised when a parsed query fails resolution against the catalog."""


class UnsupportedConstruct(EagerSqlError):
    """Raised when the target dialect cannot express an AST node."""


class RewriteUnsupported(EagerSqlError):
    """Raised when a matched query cannot be soundly rewritten (e.g. AVG)."""


class GuardRejected(EagerSqlError):
    """Raised when a statement is refused by the safety guard."""


class AdapterError(EagerSqlError):
    """Raised when the database adapter reports an engine error."""


class AdapterTimeout(AdapterError):
    """Raised when a statement exceeds its deadline and was cancelled."""


class DebugFailed(EagerSqlError):
    """Raised when the debug loop exhausts its provider-call budget."""

    def __init__(self, last_error: Exception | str):
        super().__init__(f"debugging failed: {last_error}")
        self.last_error = last_error
