"""Value types flowing through the speculation pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

from eagersql.sqlcore.ast import SqlAst


@dataclass(frozen=True)
class QuerySnapshot:
    """The user's raw editor state at one instant."""

    text: str
    cursor: tuple[int, int]  # (line, column), zero-based
    dialect: str = "generic"
    trigger: str = "poll"  # "poll" | "enter" | "double_enter"
    seq: int = 0

    def cursor_offset(self) -> int:
        lines = self.text.split("\n")
        line = min(self.cursor[0], len(lines) - 1)
        column = min(self.cursor[1], len(lines[line]))
        return sum(len(l) + 1 for l in lines[:line]) + column


@dataclass(frozen=True)
class Hunk:
    old: str
    new: str


class PatchMiss(Exception):
    """A cached patch did not apply or did not validate."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason  # "hunk_not_found" | "still_invalid"


@dataclass(frozen=True)
class DiffPatch:
    """Ordered replacement hunks mapping one text to another."""

    hunks: tuple[Hunk, ...] = ()

    def apply(self, text: str, cursor_offset: int | None = None) -> tuple[str, int | None]:
        """Apply hunks in order; each `old` must occur in the current text.

        Returns the patched text and the cursor offset shifted past any
        replacements that happened before it.
        """
        for hunk in self.hunks:
            index = text.find(hunk.old)
            if index < 0 or not hunk.old:
                raise PatchMiss("hunk_not_found")
            text = text[:index] + hunk.new + text[index + len(hunk.old):]
            if cursor_offset is not None and index < cursor_offset:
                cursor_offset += len(hunk.new) - len(hunk.old)
        return text, cursor_offset

    def extended(self, hunk: Hunk) -> "DiffPatch":
        return DiffPatch(self.hunks + (hunk,))

    @property
    def empty(self) -> bool:
        return not self.hunks


@dataclass
class DebugOutcome:
    query: SqlAst | None
    patch: DiffPatch
    provider_calls: int
    succeeded: bool
    text: str = ""  # the validated query text when succeeded


@dataclass
class SupersetQuery:
    ast: SqlAst  # over-projected, canonical
    over_projected: tuple[tuple[str, str], ...]  # (block name, column) added
    basis: DebugOutcome


@dataclass
class ProviderConfig:
    """Iteration budget and model identifiers for the debug loop."""

    budget: int = 3  # default iteration budget N
    small_model: str = "small"
    large_model: str = "large"
    current: int = field(default=-1)  # adaptive value in [1, budget]
    history_neighbors: int = 1

    def __post_init__(self) -> None:
        if self.current < 0:
            self.current = self.budget
        if not (1 <= self.current <= self.budget):
            raise ValueError("current budget must be within [1, budget]")
