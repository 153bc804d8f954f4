"""Canonicalization: a stable, semantics-preserving normal form.

Inner joins are folded into comma joins with their ON conjuncts moved to
WHERE; conjunct lists are deduplicated and sorted by their alias-insensitive
rendered form; commutative comparisons are oriented column-first. The result
is idempotent: canonicalizing twice equals canonicalizing once.
"""

from __future__ import annotations

from dataclasses import replace

from eagersql.sqlcore import ast
from eagersql.sqlcore.render import render_expr

_MIRROR = {"=": "=", "<>": "<>", "<": ">", ">": "<", "<=": ">=", ">=": "<="}


def _orient(node: ast.Node) -> ast.Node:
    """Orient `literal op expr` comparisons as `expr op' literal`."""
    if (
        isinstance(node, ast.BinOp)
        and node.op in _MIRROR
        and isinstance(node.left, ast.Literal)
        and not isinstance(node.right, ast.Literal)
    ):
        return ast.BinOp(_MIRROR[node.op], node.right, node.left)
    return node


def canonical_text(expr: ast.Node) -> str:
    """Alias-insensitive canonical rendering used for conjunct identity."""
    return render_expr(expr, resolved=True)


def _sort_key(expr: ast.Node) -> tuple:
    """Order by literal-masked shape first so that substituting constants
    never reorders conjuncts (keeps structure keys literal-invariant)."""
    shape = render_expr(expr, resolved=True, lit=lambda l: f"?{l.kind}")
    values = tuple(
        (n.kind, float(n.value) if n.kind == "num" else str(n.value))
        for n in ast.walk(expr)
        if isinstance(n, ast.Literal) and n.kind in ("num", "str")
    )
    return (shape, values)


def _canon_conjuncts(expr: ast.Node | None) -> ast.Node | None:
    conjuncts = [_canon_expr(c) for c in ast.conjuncts_of(expr)]
    seen: dict[str, ast.Node] = {}
    for c in conjuncts:
        seen.setdefault(canonical_text(c), c)
    ordered = sorted(seen.values(), key=_sort_key)
    return ast.and_of(ordered)


def _canon_expr(node: ast.Node) -> ast.Node:
    def fn(n: ast.Node) -> ast.Node | None:
        if isinstance(n, ast.And):
            # Flatten nested ANDs, dedupe, sort.
            out = _canon_conjuncts(n)
            return out if out is not None else n
        if isinstance(n, ast.Or):
            items: dict[str, ast.Node] = {}
            flat: list[ast.Node] = []
            for item in n.items:
                flat.extend(item.items if isinstance(item, ast.Or) else [item])
            for item in flat:
                items.setdefault(canonical_text(item), item)
            ordered = tuple(sorted(items.values(), key=_sort_key))
            return ordered[0] if len(ordered) == 1 else ast.Or(ordered)
        if isinstance(n, ast.BinOp):
            return _orient(n)
        if isinstance(n, (ast.ScalarSelect,)):
            return ast.ScalarSelect(canonicalize_select(n.select))
        if isinstance(n, ast.InSelect):
            return replace(n, select=canonicalize_select(n.select))
        return None

    return ast.transform(node, fn)


def _table_sort_key(table: ast.TableLike) -> tuple[str, str]:
    if isinstance(table, ast.TableName):
        return (table.name, table.alias or "")
    return (table.alias, "")


def canonicalize_select(select: ast.SelectStmt) -> ast.SelectStmt:
    ctes = tuple(ast.Cte(c.name, canonicalize_select(c.select)) for c in select.ctes)

    def canon_table(table: ast.TableLike) -> ast.TableLike:
        if isinstance(table, ast.DerivedTable):
            return ast.DerivedTable(canonicalize_select(table.select), table.alias)
        return table

    inner_tables: list[ast.TableLike] = []
    extra_conjuncts: list[ast.Node] = []
    outer_joins: list[ast.Join] = []
    has_outer = any(j.kind in ("left", "right") for j in select.joins)

    if select.from_first is not None:
        inner_tables.append(canon_table(select.from_first))
    for join in select.joins:
        table = canon_table(join.table)
        if join.kind in ("inner", "comma", "cross") and not has_outer:
            inner_tables.append(table)
            if join.on is not None:
                extra_conjuncts.extend(ast.conjuncts_of(join.on))
        elif join.kind == "inner" and has_outer:
            # Keep join order when outer joins are present; still fold ON
            # conjuncts of inner joins adjacent to outer joins is unsafe, so
            # only canonicalize the condition in place.
            on = _canon_expr(join.on) if join.on is not None else None
            outer_joins.append(ast.Join("inner", table, on))
        else:
            on = _canon_expr(join.on) if join.on is not None else None
            outer_joins.append(ast.Join(join.kind, table, on))

    if not has_outer:
        inner_tables.sort(key=_table_sort_key)
        from_first = inner_tables[0] if inner_tables else None
        joins = tuple(ast.Join("comma", t, None) for t in inner_tables[1:])
    else:
        from_first = inner_tables[0] if inner_tables else None
        joins = tuple(
            [ast.Join("comma", t, None) for t in inner_tables[1:]] + outer_joins
        )

    where_all = list(ast.conjuncts_of(select.where)) + extra_conjuncts
    where = _canon_conjuncts(ast.and_of(where_all))
    having = _canon_conjuncts(select.having)
    items = tuple(ast.SelectItem(_canon_expr(i.expr), i.alias) for i in select.items)
    group_by = tuple(_canon_expr(e) for e in select.group_by)
    order_by = tuple(ast.OrderItem(_canon_expr(o.expr), o.desc) for o in select.order_by)

    return replace(
        select,
        ctes=ctes,
        items=items,
        from_first=from_first,
        joins=joins,
        where=where,
        group_by=group_by,
        having=having,
        order_by=order_by,
    )


def canonicalize(sql: ast.SqlAst) -> ast.SqlAst:
    """Return the canonical form of a statement; idempotent."""
    root = sql.root
    if isinstance(root, ast.SelectStmt):
        return sql.with_root(canonicalize_select(root))
    if isinstance(root, ast.CreateTempTable):
        return sql.with_root(replace(root, select=canonicalize_select(root.select)))
    return sql
