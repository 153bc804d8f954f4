"""Bounded LLM debug loop and the cached-patch fast path."""

from __future__ import annotations

import json

from eagersql.errors import EagerSqlError, ParseError, SemanticError
from eagersql.speculator.history import HistoryStore
from eagersql.speculator.prompts import build_debug_prompt
from eagersql.speculator.provider import Provider, ProviderError
from eagersql.speculator.types import (
    DebugOutcome,
    DiffPatch,
    Hunk,
    PatchMiss,
    ProviderConfig,
    QuerySnapshot,
)
from eagersql.sqlcore import parse, resolve
from eagersql.sqlcore.ast import SqlAst
from eagersql.sqlcore.resolve import SchemaCatalog


def validate(text: str, catalog: SchemaCatalog, dialect: str = "generic") -> SqlAst:
    """Grammar plus semantic check; raises ParseError or SemanticError."""
    return resolve(parse(text, dialect), catalog)


def _parse_hunks(reply: str) -> list[Hunk]:
    try:
        raw = json.loads(reply)
    except (ValueError, TypeError):
        return []
    if not isinstance(raw, list):
        return []
    hunks = []
    for entry in raw:
        if isinstance(entry, dict) and "old" in entry and "new" in entry:
            hunks.append(Hunk(str(entry["old"]), str(entry["new"])))
    return hunks


def debug(
    snapshot: QuerySnapshot,
    catalog: SchemaCatalog,
    history: HistoryStore,
    provider: Provider,
    cfg: ProviderConfig,
) -> DebugOutcome:
    """Debug the snapshot text into a valid query within 2*current calls.

    Iterations 1..current-1 ask the small model for a local fix, iteration
    `current` the large model for a local fix, iterations current+1..2*current-1
    the small model for a full rewrite, and iteration 2*current the large
    model for a full rewrite. The first validated query wins. On exhaustion
    the adaptive budget shrinks by one (or resets to the default once it
    reaches one).
    """
    text = snapshot.text
    try:
        query = validate(text, catalog, snapshot.dialect)
        return DebugOutcome(query, DiffPatch(), 0, True, text)
    except (ParseError, SemanticError) as exc:
        last_error: EagerSqlError = exc

    budget = cfg.current
    neighbors = history.lookup(text, cfg.history_neighbors)
    patch = DiffPatch()
    current_text = text
    calls = 0

    for iteration in range(1, 2 * budget + 1):
        mode = "local_fix" if iteration <= budget else "rewrite"
        model = (
            cfg.large_model
            if iteration in (budget, 2 * budget)
            else cfg.small_model
        )
        messages = build_debug_prompt(
            current_text, str(last_error), catalog, neighbors, snapshot.dialect, mode
        )
        try:
            reply = provider.complete(messages, model)
        except ProviderError:
            break
        calls += 1
        if mode == "local_fix":
            hunks = _parse_hunks(reply)
            next_text = current_text
            applied: list[Hunk] = []
            for hunk in hunks:
                index = next_text.find(hunk.old)
                if index < 0 or not hunk.old:
                    continue
                next_text = next_text[:index] + hunk.new + next_text[index + len(hunk.old):]
                applied.append(hunk)
            if next_text == current_text:
                continue
            step_patch = tuple(applied)
        else:
            if not reply.strip() or reply == current_text:
                continue
            step_patch = (Hunk(current_text, reply),)
            next_text = reply
        try:
            query = validate(next_text, catalog, snapshot.dialect)
        except (ParseError, SemanticError) as exc:
            last_error = exc
            current_text = next_text
            patch = DiffPatch(patch.hunks + step_patch)
            continue
        patch = DiffPatch(patch.hunks + step_patch)
        return DebugOutcome(query, patch, calls, True, next_text)

    # Exhausted: adapt the budget for the next attempt.
    if cfg.current > 1:
        cfg.current -= 1
    else:
        cfg.current = cfg.budget
    return DebugOutcome(None, patch, calls, False, "")


def apply_cached_patch(
    snapshot: QuerySnapshot,
    patch: DiffPatch,
    catalog: SchemaCatalog,
) -> tuple[SqlAst, str, int]:
    """Reapply a prior debug patch without any provider calls.

    Returns (ast, patched text, shifted cursor offset); raises PatchMiss
    when a hunk no longer occurs or the patched text still fails validation.
    """
    patched, cursor = patch.apply(snapshot.text, snapshot.cursor_offset())
    try:
        query = validate(patched, catalog, snapshot.dialect)
    except (ParseError, SemanticError) as exc:
        raise PatchMiss("still_invalid") from exc
    return query, patched, cursor if cursor is not None else 0
