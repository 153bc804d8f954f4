"""Column resolution and semantic checks against a schema catalog."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from eagersql.errors import SemanticError
from eagersql.sqlcore import ast
from eagersql.sqlcore.render import render_expr


@dataclass
class SchemaCatalog:
    """Tables and their columns, with optional column type tags."""

    tables: dict[str, list[str]]
    types: dict[tuple[str, str], str] = field(default_factory=dict)

    def has_table(self, name: str) -> bool:
        return name in self.tables

    def columns(self, table: str) -> list[str]:
        return self.tables[table]

    def column_type(self, table: str, column: str) -> str:
        return self.types.get((table, column), "num")

    def identifiers(self) -> set[str]:
        out = set(self.tables)
        for cols in self.tables.values():
            out.update(cols)
        return out


@dataclass
class _Source:
    label: str  # alias if given, else table/CTE name
    key: str  # base table real name, CTE name, or derived alias
    columns: list[str]


class _Scope:
    def __init__(self, sources: list[_Source], parent: "_Scope | None" = None):
        self.sources = sources
        self.parent = parent

    def find(self, ref: ast.ColumnRef) -> _Source:
        if ref.table is not None:
            for src in self.sources:
                if src.label == ref.table:
                    if ref.name not in src.columns:
                        raise SemanticError(
                            f"unknown column {ref.table}.{ref.name}"
                        )
                    return src
            if self.parent is not None:
                return self.parent.find(ref)
            raise SemanticError(f"unknown table or alias {ref.table!r}")
        matches = [s for s in self.sources if ref.name in s.columns]
        if len(matches) == 1:
            return matches[0]
        if len(matches) > 1:
            raise SemanticError(f"ambiguous column {ref.name!r}")
        if self.parent is not None:
            return self.parent.find(ref)
        raise SemanticError(f"unknown column {ref.name!r}")


def output_columns(select: ast.SelectStmt, catalog: SchemaCatalog,
                   ctes: dict[str, list[str]] | None = None) -> list[str]:
    """Output column names of a select, expanding stars via the catalog."""
    ctes = dict(ctes or {})
    for cte in select.ctes:
        ctes[cte.name] = output_columns(cte.select, catalog, ctes)
    cols: list[str] = []
    sources = _collect_sources(select, catalog, ctes)
    for item in select.items:
        if isinstance(item.expr, ast.Star):
            for src in sources:
                if item.expr.table is None or src.label == item.expr.table:
                    cols.extend(src.columns)
        elif item.alias:
            cols.append(item.alias)
        elif isinstance(item.expr, ast.ColumnRef):
            cols.append(item.expr.name)
        else:
            cols.append(render_expr(item.expr))
    return cols


def _collect_sources(select: ast.SelectStmt, catalog: SchemaCatalog,
                     ctes: dict[str, list[str]]) -> list[_Source]:
    sources: list[_Source] = []
    for table in ast.from_tables(select):
        if isinstance(table, ast.TableName):
            if table.name in ctes:
                cols = ctes[table.name]
            elif catalog.has_table(table.name):
                cols = catalog.columns(table.name)
            else:
                raise SemanticError(f"unknown table {table.name!r}")
            sources.append(_Source(table.alias or table.name, table.name, list(cols)))
        else:
            cols = output_columns(table.select, catalog, ctes)
            sources.append(_Source(table.alias, table.alias, cols))
    return sources


def resolve(sql: ast.SqlAst, catalog: SchemaCatalog) -> ast.SqlAst:
    """Annotate every column reference with its source and run semantic checks.

    Raises SemanticError for unknown/ambiguous columns, unknown tables, and
    aggregate queries whose bare projection or ORDER BY columns are missing
    from GROUP BY.
    """
    root = sql.root
    if isinstance(root, ast.SelectStmt):
        return sql.with_root(_resolve_select(root, catalog, {}, None))
    if isinstance(root, ast.CreateTempTable):
        select = _resolve_select(root.select, catalog, {}, None)
        return sql.with_root(replace(root, select=select))
    return sql


def _resolve_select(select: ast.SelectStmt, catalog: SchemaCatalog,
                    ctes: dict[str, list[str]], parent: _Scope | None) -> ast.SelectStmt:
    ctes = dict(ctes)
    new_ctes: list[ast.Cte] = []
    for cte in select.ctes:
        resolved_cte = _resolve_select(cte.select, catalog, ctes, None)
        new_ctes.append(ast.Cte(cte.name, resolved_cte))
        ctes[cte.name] = output_columns(cte.select, catalog, ctes)

    sources = _collect_sources(select, catalog, ctes)
    labels = [s.label for s in sources]
    if len(labels) != len(set(labels)):
        raise SemanticError("duplicate table alias in FROM clause")
    scope = _Scope(sources, parent)

    def res_expr(node: ast.Node) -> ast.Node:
        if isinstance(node, ast.ColumnRef):
            src = scope.find(node)
            return replace(node, source=src.key)
        if isinstance(node, (ast.ScalarSelect,)):
            return ast.ScalarSelect(_resolve_select(node.select, catalog, ctes, scope))
        if isinstance(node, ast.InSelect):
            return ast.InSelect(
                res_expr(node.operand),
                _resolve_select(node.select, catalog, ctes, scope),
                node.negated,
            )
        if isinstance(node, ast.Star):
            return node

        def rebuild(value):
            if isinstance(value, ast.Node):
                return res_expr(value)
            if isinstance(value, tuple):
                return tuple(rebuild(v) for v in value)
            return value

        from dataclasses import fields as dc_fields

        kwargs = {f.name: rebuild(getattr(node, f.name)) for f in dc_fields(node)}
        return replace(node, **kwargs)

    new_from: ast.TableLike | None = select.from_first
    if isinstance(new_from, ast.DerivedTable):
        new_from = ast.DerivedTable(_resolve_select(new_from.select, catalog, ctes, None), new_from.alias)
    new_joins: list[ast.Join] = []
    for join in select.joins:
        table = join.table
        if isinstance(table, ast.DerivedTable):
            table = ast.DerivedTable(_resolve_select(table.select, catalog, ctes, None), table.alias)
        on = res_expr(join.on) if join.on is not None else None
        new_joins.append(ast.Join(join.kind, table, on))

    new_items = tuple(
        ast.SelectItem(res_expr(i.expr), i.alias) for i in select.items
    )
    new_where = res_expr(select.where) if select.where is not None else None
    if new_where is not None and ast.is_aggregate(new_where):
        raise SemanticError("aggregate functions are not allowed in WHERE")
    new_group = tuple(res_expr(e) for e in select.group_by)
    new_having = res_expr(select.having) if select.having is not None else None
    item_aliases = {i.alias for i in select.items if i.alias}

    def res_order(expr: ast.Node) -> ast.Node:
        # ORDER BY may reference a projection alias.
        if isinstance(expr, ast.ColumnRef) and expr.table is None and expr.name in item_aliases:
            return expr
        return res_expr(expr)

    new_order = tuple(ast.OrderItem(res_order(o.expr), o.desc) for o in select.order_by)

    _check_grouping(new_items, new_group, new_having, new_order)

    return replace(
        select,
        ctes=tuple(new_ctes),
        from_first=new_from,
        joins=tuple(new_joins),
        items=new_items,
        where=new_where,
        group_by=new_group,
        having=new_having,
        order_by=new_order,
    )


def _check_grouping(items, group_by, having, order_by) -> None:
    aggregated = (
        bool(group_by)
        or any(ast.is_aggregate(i.expr) for i in items if not isinstance(i.expr, ast.Star))
        or (having is not None and ast.is_aggregate(having))
    )
    if not aggregated:
        if having is not None:
            raise SemanticError("HAVING requires an aggregate query")
        return
    group_keys = {render_expr(e, resolved=True) for e in group_by}
    ungrouped: list[str] = []
    for item in items:
        if isinstance(item.expr, ast.Star):
            raise SemanticError("SELECT * is not allowed in an aggregate query")
        if ast.is_aggregate(item.expr):
            continue
        if render_expr(item.expr, resolved=True) not in group_keys:
            ungrouped.append(render_expr(item.expr))
    if ungrouped:
        raise SemanticError("ungrouped columns: " + ", ".join(sorted(set(ungrouped))))
    for order in order_by:
        if ast.is_aggregate(order.expr):
            continue
        key = render_expr(order.expr, resolved=True)
        item_keys = {render_expr(i.expr, resolved=True) for i in items}
        aliases = {i.alias for i in items if i.alias}
        if key not in group_keys and key not in item_keys:
            if not (isinstance(order.expr, ast.ColumnRef) and order.expr.name in aliases):
                raise SemanticError(f"ORDER BY term not in GROUP BY: {render_expr(order.expr)}")
    return
