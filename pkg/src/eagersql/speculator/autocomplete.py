"""Provider-backed completion of valid query text at the cursor."""

from __future__ import annotations

from eagersql.speculator.history import HistoryStore
from eagersql.speculator.prompts import build_completion_prompt
from eagersql.speculator.provider import Provider, ProviderError
from eagersql.sqlcore.resolve import SchemaCatalog


def autocomplete(
    text: str,
    cursor_offset: int,
    catalog: SchemaCatalog,
    history: HistoryStore,
    provider: Provider,
    model: str = "small",
    neighbors: int = 1,
    dialect: str = "generic",
) -> str:
    """Ask the provider what the user may type next at the cursor.

    The completion is advisory text only; it is mined for column names and
    never executed. Transport failures degrade to an empty completion so
    speculation never blocks the pipeline.
    """
    messages = build_completion_prompt(
        text, cursor_offset, catalog, history.lookup(text, neighbors), dialect
    )
    try:
        return provider.complete(messages, model)
    except ProviderError:
        return ""
