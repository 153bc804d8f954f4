"""Over-projection: widen the cursor block with columns the completion hints at.

Extra columns go into SELECT (and GROUP BY when the block aggregates), never
into predicates, so the widened query's rows always contain the original
query's rows.
"""

from __future__ import annotations

import re
from dataclasses import replace

from eagersql.speculator.types import DebugOutcome, DiffPatch, SupersetQuery
from eagersql.sqlcore import ast
from eagersql.sqlcore.resolve import SchemaCatalog
from eagersql.sqlcore.tokens import KEYWORDS

_IDENT = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*")


def completion_tokens(completion: str) -> list[str]:
    """Identifier tokens of the completion text, lowercased, keywords dropped."""
    seen: list[str] = []
    for match in _IDENT.finditer(completion):
        token = match.group(0).lower()
        if token not in KEYWORDS and token not in seen:
            seen.append(token)
    return seen


def cursor_select(root: ast.Node, offset: int | None) -> ast.SelectStmt:
    """Innermost select whose source span contains the cursor, else the root."""
    target: ast.SelectStmt | None = None
    best = None
    for node in ast.walk(root):
        if not isinstance(node, ast.SelectStmt):
            continue
        if target is None:
            target = node  # outermost fallback
        if offset is None or node.span is None:
            continue
        start, end = node.span
        if start <= offset <= end:
            width = end - start
            if best is None or width <= best:
                best = width
                target = node
    if target is None:
        raise ValueError("query has no select block")
    return target


def _from_aliases(select: ast.SelectStmt) -> list[tuple[str, str]]:
    """(alias-or-name, base table) for each plain table in the FROM clause."""
    out = []
    for table in ast.from_tables(select):
        if isinstance(table, ast.TableName):
            out.append((table.alias or table.name, table.name))
    return out


def _projected_names(select: ast.SelectStmt) -> set[str]:
    names = set()
    for item in select.items:
        if item.alias:
            names.add(item.alias.lower())
        if isinstance(item.expr, ast.ColumnRef):
            names.add(item.expr.name)
    return names


def _feasible(
    token: str, select: ast.SelectStmt, catalog: SchemaCatalog
) -> ast.ColumnRef | None:
    """Resolve a token to exactly one column of the block's base tables."""
    hits = [
        (alias, base)
        for alias, base in _from_aliases(select)
        if catalog.has_table(base) and token in catalog.columns(base)
    ]
    if len(hits) != 1:
        return None
    alias, base = hits[0]
    qualify = len(_from_aliases(select)) > 1
    return ast.ColumnRef(table=alias if qualify else None, name=token, source=base)


def over_project(
    debugged: ast.SqlAst,
    completion: str,
    catalog: SchemaCatalog,
    cursor_offset: int | None = None,
    basis: DebugOutcome | None = None,
) -> SupersetQuery:
    """Add each feasible completion column to the cursor block's SELECT.

    Aggregated blocks also gain the column in GROUP BY so grouping stays
    consistent. Predicates never change; infeasible tokens are ignored, so
    the worst case is the debugged query unchanged.
    """
    target = cursor_select(debugged.root, cursor_offset)
    has_star = any(isinstance(item.expr, ast.Star) for item in target.items)
    projected = _projected_names(target)
    added: list[ast.ColumnRef] = []
    if not has_star:
        for token in completion_tokens(completion):
            if token in projected:
                continue
            ref = _feasible(token, target, catalog)
            if ref is not None:
                added.append(ref)
                projected.add(token)
    if not added:
        result = debugged
    else:
        aggregated = any(ast.is_aggregate(item.expr) for item in target.items) or bool(
            target.group_by
        )
        widened = replace(
            target,
            items=target.items + tuple(ast.SelectItem(ref, None) for ref in added),
            group_by=target.group_by + tuple(added) if aggregated else target.group_by,
        )

        def swap(node: ast.Node) -> ast.Node | None:
            return widened if node is target else None

        result = ast.SqlAst(ast.transform(debugged.root, swap), debugged.dialect)
    block_tag = "cursor"
    over = tuple((block_tag, ref.name) for ref in added)
    if basis is None:
        basis = DebugOutcome(debugged, DiffPatch(), provider_calls=0, succeeded=True)
    return SupersetQuery(ast=result, over_projected=over, basis=basis)
