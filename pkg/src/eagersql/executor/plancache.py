"""Plan cache keyed by literal-stripped statement structure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from eagersql.sqlcore import ast
from eagersql.sqlcore.fingerprint import extract_literals, structure_key


@dataclass
class PlanCache:
    """Maps structure keys to parameterized SQL templates.

    A hit binds fresh literal values into the existing template, so only the
    first occurrence of a query shape pays parse/plan cost downstream.
    """

    entries: dict[str, str] = field(default_factory=dict)
    hits: int = 0
    misses: int = 0

    def lookup(self, select: ast.SelectStmt) -> tuple[str, list[Any]]:
        """Parameterized text plus bound literals for this select."""
        key = structure_key(select)
        text, params = extract_literals(select)
        if key in self.entries:
            self.hits += 1
        else:
            self.misses += 1
            self.entries[key] = text
        # The current text is always used for execution (LIMIT is rendered,
        # not parameterized); the entry tracks plan reuse by structure.
        return text, params

    def __len__(self) -> int:
        return len(self.entries)
