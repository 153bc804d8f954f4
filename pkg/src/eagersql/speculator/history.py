"""Query-history store with deterministic token-cosine nearest neighbors."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

_TOKEN = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*|\d+")


def vectorize(text: str) -> Counter:
    return Counter(token.lower() for token in _TOKEN.findall(text))


def cosine(a: Counter, b: Counter) -> float:
    if not a or not b:
        return 0.0
    dot = sum(count * b[token] for token, count in a.items())
    norm = math.sqrt(sum(c * c for c in a.values())) * math.sqrt(sum(c * c for c in b.values()))
    return dot / norm if norm else 0.0


@dataclass
class HistoryStore:
    """Insertion-ordered (text, vector) entries ranked by cosine similarity."""

    entries: list[tuple[str, Counter]] = field(default_factory=list)

    def add(self, text: str) -> None:
        self.entries.append((text, vectorize(text)))

    def lookup(self, text: str, k: int = 1) -> list[str]:
        """Top-k entries by non-increasing similarity; ties keep insertion order."""
        if k <= 0 or not self.entries:
            return []
        probe = vectorize(text)
        scored = [
            (-cosine(probe, vector), index, entry)
            for index, (entry, vector) in enumerate(self.entries)
        ]
        scored.sort()
        return [entry for _, _, entry in scored[:k]]

    def __len__(self) -> int:
        return len(self.entries)
