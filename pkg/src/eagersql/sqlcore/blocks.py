"""Decomposition of a statement into SELECT blocks (CTEs, subqueries, main).

Each block is standalone: where a nested select was extracted, the parent
references the child by block name, so blocks can later be materialized as
temp tables (reference becomes the temp name) or inlined back as derived
tables. Correlated subqueries are extracted as blocks for DAG visibility but
the parent keeps the original nested select, since correlation cannot cross
a derived-table boundary.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from eagersql.sqlcore import ast
from eagersql.sqlcore.canonical import canonical_text
from eagersql.sqlcore.fingerprint import definition_key
from eagersql.sqlcore.render import render_expr


@dataclass(frozen=True)
class SelectBlock:
    id: str
    kind: str  # "cte" | "subquery" | "main"
    name: str  # cte name, generated sq name, or "main"
    select: ast.SelectStmt
    sources: tuple[str, ...]  # base tables and referenced block names
    depends_on: tuple[str, ...]  # subset of sources that are block names
    correlated: bool = False
    span: tuple[int, int] | None = field(default=None, compare=False)

    @property
    def projections(self) -> tuple[tuple[ast.Node, str | None], ...]:
        return tuple((i.expr, i.alias) for i in self.select.items)

    @property
    def group_by(self) -> tuple[ast.Node, ...]:
        return self.select.group_by

    @property
    def where_conjuncts(self) -> tuple[ast.Node, ...]:
        return ast.conjuncts_of(self.select.where)

    @property
    def having_conjuncts(self) -> tuple[ast.Node, ...]:
        return ast.conjuncts_of(self.select.having)

    @property
    def outer_join_conjuncts(self) -> tuple[tuple[str, str], ...]:
        """Ordered (join kind, canonical conjunct text) pairs for outer joins."""
        out: list[tuple[str, str]] = []
        for join in self.select.joins:
            if join.kind in ("left", "right"):
                for conj in ast.conjuncts_of(join.on):
                    out.append((join.kind, canonical_text(conj)))
            elif join.kind == "cross":
                out.append(("cross", _table_key(join.table)))
        return tuple(out)

    @property
    def aggregated(self) -> bool:
        return bool(self.select.group_by) or any(
            ast.is_aggregate(i.expr) for i in self.select.items
        )

    @property
    def definition(self) -> str:
        return definition_key(self.select)


def _table_key(table: ast.TableLike) -> str:
    if isinstance(table, ast.TableName):
        return table.name
    return table.alias


def strip_limit_order(block: SelectBlock) -> SelectBlock:
    """Clear LIMIT and ORDER BY; everything else untouched."""
    if block.select.limit is None and not block.select.order_by:
        return block
    return replace(block, select=replace(block.select, limit=None, order_by=()))


def _block_id(kind: str, path: str, sources: Iterable[str]) -> str:
    text = f"{kind}|{path}|{','.join(sorted(sources))}"
    return hashlib.sha256(text.encode()).hexdigest()[:12]


class _Decomposer:
    def __init__(self) -> None:
        self.blocks: list[SelectBlock] = []
        self.block_names: set[str] = set()
        self.counter = 0

    def run(self, root: ast.SelectStmt) -> list[SelectBlock]:
        ctes = root.ctes
        for index, cte in enumerate(ctes):
            select, deps = self.extract_children(cte.select, f"cte:{index}")
            self.add_block("cte", cte.name, f"cte:{index}", select, deps)
        main_select, deps = self.extract_children(replace(root, ctes=()), "main")
        main_select = replace(main_select, span=root.span)
        self.add_block("main", "main", "main", main_select, deps)
        return self.blocks

    def add_block(self, kind: str, name: str, path: str, select: ast.SelectStmt,
                  deps: set[str], correlated: bool = False) -> SelectBlock:
        sources = self.sources_of(select) | deps
        block = SelectBlock(
            id=_block_id(kind, path, sources),
            kind=kind,
            name=name,
            select=select,
            sources=tuple(sorted(sources)),
            depends_on=tuple(sorted(s for s in sources if s in self.block_names)),
            correlated=correlated,
            span=select.span,
        )
        self.blocks.append(block)
        self.block_names.add(name)
        return block

    def sources_of(self, select: ast.SelectStmt) -> set[str]:
        out: set[str] = set()
        for table in ast.from_tables(select):
            if isinstance(table, ast.TableName):
                out.add(table.name)
            else:
                out.add(table.alias)
        return out

    def fresh_name(self) -> str:
        self.counter += 1
        return f"sq{self.counter}"

    def extract_children(self, select: ast.SelectStmt, path: str) -> tuple[ast.SelectStmt, set[str]]:
        """Extract nested selects of `select` into blocks; return the rewritten
        select plus the names of blocks it references."""
        deps: set[str] = set()

        def own_sources(sel: ast.SelectStmt) -> set[str]:
            labels: set[str] = set()
            for table in ast.from_tables(sel):
                if isinstance(table, ast.TableName):
                    labels.add(table.alias or table.name)
                else:
                    labels.add(table.alias)
            return labels

        def is_correlated(sel: ast.SelectStmt) -> bool:
            local = own_sources(sel)
            for node in ast.walk(sel):
                if isinstance(node, ast.ColumnRef) and node.table is not None:
                    if node.table not in local and not any(
                        node.table in own_sources(inner.select)
                        for inner in ast.walk(sel)
                        if isinstance(inner, (ast.DerivedTable,))
                    ):
                        return True
            return False

        def extract_select(sel: ast.SelectStmt, ordinal: str) -> str:
            name = self.fresh_name()
            child, child_deps = self.extract_children(sel, f"{path}/sq:{ordinal}")
            self.add_block("subquery", name, f"{path}/sq:{ordinal}", child, child_deps)
            return name

        # FROM-clause derived tables.
        new_from = select.from_first
        if isinstance(new_from, ast.DerivedTable):
            name = extract_select(new_from.select, "f0")
            deps.add(name)
            new_from = ast.TableName(name, new_from.alias)
        new_joins: list[ast.Join] = []
        for index, join in enumerate(select.joins):
            table = join.table
            if isinstance(table, ast.DerivedTable):
                name = extract_select(table.select, f"f{index + 1}")
                deps.add(name)
                table = ast.TableName(name, table.alias)
            new_joins.append(ast.Join(join.kind, table, join.on))

        # Expression-level subqueries (IN / scalar).
        ordinal = [0]

        def fn(node: ast.Node) -> ast.Node | None:
            if isinstance(node, (ast.InSelect, ast.ScalarSelect)):
                sel = node.select
                ordinal[0] += 1
                if is_correlated(sel):
                    # Block recorded for the DAG, original kept in place.
                    name = self.fresh_name()
                    child, child_deps = self.extract_children(sel, f"{path}/e:{ordinal[0]}")
                    self.add_block(
                        "subquery", name, f"{path}/e:{ordinal[0]}", child, child_deps,
                        correlated=True,
                    )
                    deps.add(name)
                    return None
                name = extract_select(sel, f"e{ordinal[0]}")
                deps.add(name)
                ref = ast.SelectStmt(
                    items=(ast.SelectItem(ast.Star()),),
                    from_first=ast.TableName(name),
                )
                if isinstance(node, ast.InSelect):
                    return ast.InSelect(node.operand, ref, node.negated)
                return ast.ScalarSelect(ref)
            return None

        def map_opt(expr: ast.Node | None) -> ast.Node | None:
            return None if expr is None else ast.transform(expr, fn)

        rewritten = replace(
            select,
            from_first=new_from,
            joins=tuple(
                ast.Join(j.kind, j.table, map_opt(j.on)) for j in new_joins
            ),
            items=tuple(ast.SelectItem(ast.transform(i.expr, fn), i.alias) for i in select.items),
            where=map_opt(select.where),
            group_by=tuple(ast.transform(e, fn) for e in select.group_by),
            having=map_opt(select.having),
            order_by=tuple(ast.OrderItem(ast.transform(o.expr, fn), o.desc) for o in select.order_by),
        )
        return rewritten, deps


def decompose(sql: ast.SqlAst) -> list[SelectBlock]:
    """Split a statement into dependency-ordered SELECT blocks.

    CTEs come first in declaration order, then extracted subqueries (each
    before the block that references it), then the main block.
    """
    root = sql.root if isinstance(sql, ast.SqlAst) else sql
    if isinstance(root, ast.CreateTempTable):
        root = root.select
    if not isinstance(root, ast.SelectStmt):
        raise ValueError("only SELECT statements can be decomposed")
    blocks = _Decomposer().run(root)
    return blocks


def replace_table_refs(select: ast.SelectStmt,
                       fn: Callable[[ast.TableName], ast.TableLike | None]) -> ast.SelectStmt:
    """Rewrite FROM-clause table references throughout a select tree."""

    def node_fn(node: ast.Node) -> ast.Node | None:
        if isinstance(node, ast.SelectStmt):
            new_from = node.from_first
            if isinstance(new_from, ast.TableName):
                new_from = fn(new_from) or new_from
            joins = []
            changed = False
            for join in node.joins:
                table = join.table
                if isinstance(table, ast.TableName):
                    new_table = fn(table)
                    if new_table is not None:
                        table = new_table
                        changed = True
                joins.append(ast.Join(join.kind, table, join.on))
            if new_from is not node.from_first or changed:
                return replace(node, from_first=new_from, joins=tuple(joins))
        return None

    return ast.transform(select, node_fn)  # type: ignore[return-value]


def project_aliases(block: SelectBlock) -> list[tuple[str, str, ast.Node]]:
    """Stable output aliases for a block's projections.

    Returns (canonical expression key, output alias, expression) triples;
    used when materializing a block so downstream rewrites can address its
    columns by name.
    """
    out: list[tuple[str, str, ast.Node]] = []
    used: set[str] = set()
    for expr, alias in block.projections:
        key = canonical_text(expr)
        if alias:
            name = alias
        elif isinstance(expr, ast.ColumnRef):
            name = expr.name
        else:
            digest = hashlib.sha256(key.encode()).hexdigest()[:8]
            if isinstance(expr, ast.FuncCall):
                arg = ""
                if expr.args and isinstance(expr.args[0], ast.ColumnRef):
                    arg = "_" + expr.args[0].name
                name = f"{expr.name}{arg}_{digest[:4]}"
            else:
                name = f"expr_{digest}"
        while name in used:
            name = name + "_"
        used.add(name)
        out.append((key, name, expr))
    return out


def materialized_select(block: SelectBlock) -> ast.SelectStmt:
    """The block's select with every projection explicitly aliased."""
    triples = project_aliases(block)
    items = tuple(ast.SelectItem(expr, name) for _, name, expr in triples)
    return replace(block.select, items=items)
