"""Dialect-aware SQL parsing, canonicalization, decomposition, fingerprinting."""

from eagersql.sqlcore.ast import SqlAst
from eagersql.sqlcore.parser import parse
from eagersql.sqlcore.render import render
from eagersql.sqlcore.canonical import canonicalize
from eagersql.sqlcore.resolve import SchemaCatalog, resolve
from eagersql.sqlcore.blocks import SelectBlock, decompose, strip_limit_order
from eagersql.sqlcore.fingerprint import structure_key, extract_literals, definition_key

__all__ = [
    "SqlAst",
    "parse",
    "render",
    "canonicalize",
    "resolve",
    "SchemaCatalog",
    "SelectBlock",
    "decompose",
    "strip_limit_order",
    "structure_key",
    "definition_key",
    "extract_literals",
]
