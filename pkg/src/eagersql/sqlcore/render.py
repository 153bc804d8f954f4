"""Render ASTs back to SQL text."""

from __future__ import annotations

from eagersql.errors import UnsupportedConstruct
from eagersql.sqlcore import ast

# Binding strengths used to decide where parentheses are needed.
_PREC = {
    "or": 1,
    "and": 2,
    "not": 3,
    "cmp": 4,
    "add": 5,
    "mul": 6,
}

_CMP = {"=", "<>", "<", ">", "<=", ">=", "like"}


def _prec(node: ast.Node) -> int:
    if isinstance(node, ast.Or):
        return _PREC["or"]
    if isinstance(node, ast.And):
        return _PREC["and"]
    if isinstance(node, ast.Not):
        return _PREC["not"]
    if isinstance(node, (ast.IsNull, ast.InList, ast.InSelect, ast.Between)):
        return _PREC["cmp"]
    if isinstance(node, ast.BinOp):
        if node.op in _CMP:
            return _PREC["cmp"]
        if node.op in ("+", "-"):
            return _PREC["add"]
        return _PREC["mul"]
    return 10


def render_expr(node: ast.Node, resolved: bool = False, lit=None) -> str:
    """Render an expression.

    With `resolved=True`, column references print as `source.name`, giving
    an alias-insensitive canonical form used for conjunct identity and
    view-matching comparisons.
    """

    def wrap(child: ast.Node, parent_prec: int) -> str:
        text = go(child)
        return f"({text})" if _prec(child) < parent_prec else text

    def go(n: ast.Node) -> str:
        if isinstance(n, ast.Literal):
            if lit is not None:
                return lit(n)
            if n.kind == "str":
                escaped = str(n.value).replace("'", "''")
                return f"'{escaped}'"
            if n.kind == "null":
                return "NULL"
            if n.kind == "bool":
                return "TRUE" if n.value else "FALSE"
            return repr(n.value) if isinstance(n.value, float) else str(n.value)
        if isinstance(n, ast.ColumnRef):
            if resolved and n.source is not None:
                return f"{n.source}.{n.name}"
            return f"{n.table}.{n.name}" if n.table else n.name
        if isinstance(n, ast.Star):
            return f"{n.table}.*" if n.table else "*"
        if isinstance(n, ast.FuncCall):
            if n.star:
                return f"{n.name}(*)"
            inner = ", ".join(go(a) for a in n.args)
            if n.distinct:
                inner = f"DISTINCT {inner}"
            return f"{n.name}({inner})"
        if isinstance(n, ast.BinOp):
            p = _prec(n)
            op = n.op.upper() if n.op == "like" else n.op
            return f"{wrap(n.left, p)} {op} {wrap(n.right, p)}"
        if isinstance(n, ast.And):
            return " AND ".join(wrap(i, _PREC["and"]) for i in n.items)
        if isinstance(n, ast.Or):
            return " OR ".join(wrap(i, _PREC["or"]) for i in n.items)
        if isinstance(n, ast.Not):
            return f"NOT {wrap(n.operand, _PREC['not'])}"
        if isinstance(n, ast.IsNull):
            mid = "IS NOT NULL" if n.negated else "IS NULL"
            return f"{wrap(n.operand, _PREC['cmp'])} {mid}"
        if isinstance(n, ast.InList):
            items = ", ".join(go(i) for i in n.items)
            kw = "NOT IN" if n.negated else "IN"
            return f"{wrap(n.operand, _PREC['cmp'])} {kw} ({items})"
        if isinstance(n, ast.InSelect):
            kw = "NOT IN" if n.negated else "IN"
            return f"{wrap(n.operand, _PREC['cmp'])} {kw} ({render_select(n.select, resolved, lit)})"
        if isinstance(n, ast.Between):
            kw = "NOT BETWEEN" if n.negated else "BETWEEN"
            p = _PREC["cmp"]
            return f"{wrap(n.operand, p)} {kw} {wrap(n.low, p)} AND {wrap(n.high, p)}"
        if isinstance(n, ast.ScalarSelect):
            return f"({render_select(n.select, resolved, lit)})"
        if isinstance(n, ast.Case):
            parts = ["CASE"]
            for cond, result in n.whens:
                parts.append(f"WHEN {go(cond)} THEN {go(result)}")
            if n.default is not None:
                parts.append(f"ELSE {go(n.default)}")
            parts.append("END")
            return " ".join(parts)
        raise UnsupportedConstruct(f"cannot render node {type(n).__name__}")

    return go(node)


def _render_table(table: ast.TableLike, resolved: bool, lit=None) -> str:
    if isinstance(table, ast.TableName):
        return f"{table.name} AS {table.alias}" if table.alias else table.name
    return f"({render_select(table.select, resolved, lit)}) AS {table.alias}"


def render_select(select: ast.SelectStmt, resolved: bool = False, lit=None) -> str:
    parts: list[str] = []
    if select.ctes:
        ctes = ", ".join(
            f"{cte.name} AS ({render_select(cte.select, resolved, lit)})" for cte in select.ctes
        )
        parts.append(f"WITH {ctes}")
    head = "SELECT DISTINCT" if select.distinct else "SELECT"
    items = ", ".join(
        f"{render_expr(i.expr, resolved, lit)} AS {i.alias}"
        if i.alias
        else render_expr(i.expr, resolved, lit)
        for i in select.items
    )
    parts.append(f"{head} {items}")
    if select.from_first is not None:
        from_parts = [_render_table(select.from_first, resolved, lit)]
        for join in select.joins:
            table = _render_table(join.table, resolved, lit)
            if join.kind == "comma":
                from_parts[-1] = from_parts[-1] + f", {table}"
            elif join.kind == "cross":
                from_parts.append(f"CROSS JOIN {table}")
            else:
                kw = {"inner": "JOIN", "left": "LEFT JOIN", "right": "RIGHT JOIN"}[join.kind]
                clause = f"{kw} {table}"
                if join.on is not None:
                    clause += f" ON {render_expr(join.on, resolved, lit)}"
                from_parts.append(clause)
        parts.append("FROM " + " ".join(from_parts))
    if select.where is not None:
        parts.append(f"WHERE {render_expr(select.where, resolved, lit)}")
    if select.group_by:
        parts.append("GROUP BY " + ", ".join(render_expr(e, resolved, lit) for e in select.group_by))
    if select.having is not None:
        parts.append(f"HAVING {render_expr(select.having, resolved, lit)}")
    if select.order_by:
        parts.append(
            "ORDER BY "
            + ", ".join(
                render_expr(o.expr, resolved, lit) + (" DESC" if o.desc else "")
                for o in select.order_by
            )
        )
    if select.limit is not None:
        parts.append(f"LIMIT {select.limit}")
    return " ".join(parts)


def render(node: ast.SqlAst | ast.Statement, dialect: str = "generic") -> str:
    """Render a statement to SQL text in the target dialect."""
    root = node.root if isinstance(node, ast.SqlAst) else node
    if isinstance(root, ast.SelectStmt):
        return render_select(root)
    if isinstance(root, ast.CreateTempTable):
        keyword = "TEMP" if dialect == "sqlite" else "TEMPORARY"
        return f"CREATE {keyword} TABLE {root.name} AS {render_select(root.select)}"
    if isinstance(root, ast.DropTable):
        return f"DROP TABLE {root.name}"
    raise UnsupportedConstruct(f"cannot render statement {type(root).__name__}")
