"""Structure fingerprints and literal extraction for plan caching."""

from __future__ import annotations

import hashlib
from dataclasses import replace
from typing import Any

from eagersql.sqlcore import ast
from eagersql.sqlcore.render import render, render_select


def _hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def _normalize_limit(root: ast.Statement) -> ast.Statement:
    """Collapse LIMIT constants so they do not affect the structure key."""

    def fn(node: ast.Node) -> ast.Node | None:
        if isinstance(node, ast.SelectStmt) and node.limit is not None:
            return replace(node, limit=1)
        return None

    return ast.transform(root, fn)  # type: ignore[return-value]


def structure_key(sql: ast.SqlAst | ast.Statement) -> str:
    """Fingerprint of the statement with every literal replaced by a typed
    placeholder; equal for queries differing only in constants."""
    root = sql.root if isinstance(sql, ast.SqlAst) else sql
    root = _normalize_limit(root)
    text = render(root) if not isinstance(root, ast.SelectStmt) else render_select(
        root, resolved=True, lit=lambda l: f"?{l.kind}"
    )
    if isinstance(root, ast.CreateTempTable):
        text = "create:" + render_select(root.select, resolved=True, lit=lambda l: f"?{l.kind}")
    return _hash(text)


def definition_key(select: ast.SelectStmt) -> str:
    """Identity of a block definition (literals included); used to detect
    unchanged blocks across edits and to dedup temp-table creation."""
    return _hash(render_select(select, resolved=True))


def extract_literals(select: ast.SelectStmt) -> tuple[str, list[Any]]:
    """Parameterized SQL text plus literal values in binding order."""
    params: list[Any] = []

    def lit(node: ast.Literal) -> str:
        if node.kind == "null":
            return "NULL"
        params.append(node.value)
        return "?"

    text = render_select(select, lit=lit)
    return text, params
