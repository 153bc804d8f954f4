"""Turn a possibly broken partial query into a valid superset query."""

from eagersql.speculator.types import (
    DebugOutcome,
    DiffPatch,
    Hunk,
    ProviderConfig,
    QuerySnapshot,
    SupersetQuery,
)
from eagersql.speculator.provider import MockProvider, Provider, HttpProvider
from eagersql.speculator.history import HistoryStore
from eagersql.speculator.debug import apply_cached_patch, debug
from eagersql.speculator.autocomplete import autocomplete
from eagersql.speculator.overproject import over_project

__all__ = [
    "QuerySnapshot",
    "DiffPatch",
    "Hunk",
    "DebugOutcome",
    "SupersetQuery",
    "ProviderConfig",
    "Provider",
    "MockProvider",
    "HttpProvider",
    "HistoryStore",
    "debug",
    "apply_cached_patch",
    "autocomplete",
    "over_project",
]
