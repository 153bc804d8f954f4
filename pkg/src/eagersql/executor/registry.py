"""Registry of materialized temp tables with byte-budgeted LRU eviction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from eagersql.sqlcore.blocks import SelectBlock


@dataclass
class TempTableRecord:
    """One live temp table: its name, defining block, and output columns.

    `columns` pairs each projection's canonical expression text with the
    engine-visible column alias, so rewrites can address results by name.
    """

    temp_name: str
    block: SelectBlock
    columns: tuple[tuple[str, str], ...]
    size_bytes: int
    created_at: float
    last_used_at: float
    # Identity of each block-name source at creation time, so a record over
    # a CTE that has since changed is never matched against the new query.
    source_identities: tuple[tuple[str, str], ...] = ()

    @property
    def definition(self) -> str:
        return self.block.definition


@dataclass
class TempRegistry:
    """Insertion-ordered records; newest-first scans; LRU eviction."""

    records: list[TempTableRecord] = field(default_factory=list)

    def add(self, record: TempTableRecord) -> TempTableRecord:
        """Register a record, deduplicating by definition."""
        existing = self.by_definition(record.definition)
        if existing is not None:
            return existing
        self.records.append(record)
        return record

    def by_definition(self, definition: str) -> TempTableRecord | None:
        for record in self.records:
            if record.definition == definition:
                return record
        return None

    def by_name(self, temp_name: str) -> TempTableRecord | None:
        for record in self.records:
            if record.temp_name == temp_name:
                return record
        return None

    def newest_first(self) -> Iterator[TempTableRecord]:
        return reversed(self.records)

    def touch(self, temp_name: str, now: float) -> None:
        record = self.by_name(temp_name)
        if record is not None:
            record.last_used_at = max(record.last_used_at, now)

    def remove(self, temp_name: str) -> None:
        self.records = [r for r in self.records if r.temp_name != temp_name]

    @property
    def total_bytes(self) -> int:
        return sum(r.size_bytes for r in self.records)

    def evict(self, max_bytes: int, drop: Callable[[str], None] | None = None) -> list[str]:
        """Drop least-recently-used records until the byte budget holds.

        Ties on last_used_at fall back to insertion order. Drop failures do
        not keep the record alive; session teardown reclaims the table.
        """
        evicted: list[str] = []
        while self.total_bytes > max_bytes and self.records:
            victim = min(
                range(len(self.records)), key=lambda i: (self.records[i].last_used_at, i)
            )
            record = self.records.pop(victim)
            evicted.append(record.temp_name)
            if drop is not None:
                try:
                    drop(record.temp_name)
                except Exception:
                    pass
        return evicted
