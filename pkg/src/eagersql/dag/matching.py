"""Subsumption matching and query rewriting over materialized temp tables.

A temp table B subsumes a query A when A's projections are derivable from
B's outputs, B's predicate conjuncts are a subset of (or implied by) A's,
and A's grouping refines or equals B's. The rewrite answers A from B plus
residual filtering and, when grouping differs, re-aggregation.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Iterable

from eagersql.errors import RewriteUnsupported
from eagersql.executor.registry import TempTableRecord
from eagersql.sqlcore import ast
from eagersql.sqlcore.canonical import canonical_text
from eagersql.sqlcore.blocks import SelectBlock


class NoMatch(Exception):
    """Internal signal: this record cannot answer the query."""


_RANGE_OPS = {">", ">=", "<", "<="}

_REAGG = {
    "sum": ("sum", "SumOfSum"),
    "count": ("sum", "SumOfCount"),
    "max": ("max", "MaxOfMax"),
    "min": ("min", "MinOfMin"),
}


@dataclass
class MatchRewrite:
    """A record that answers the query, plus how the rewrite reshapes it."""

    table: TempTableRecord
    residual_predicates: tuple[str, ...]
    dropped_columns: tuple[str, ...]
    re_aggregation: dict[str, str]


def _as_range(conjunct: ast.Node) -> tuple[str, str, float] | None:
    """(column, op, value) for single-column numeric constant comparisons."""
    if (
        isinstance(conjunct, ast.BinOp)
        and conjunct.op in _RANGE_OPS | {"="}
        and isinstance(conjunct.right, ast.Literal)
        and conjunct.right.kind == "num"
        and isinstance(conjunct.left, ast.ColumnRef)
    ):
        return (canonical_text(conjunct.left), conjunct.op, float(conjunct.right.value))
    return None


def _implies(a: ast.Node, b: ast.Node) -> bool:
    """True when conjunct `a` restricts rows to a subset of conjunct `b`."""
    ra, rb = _as_range(a), _as_range(b)
    if ra is None or rb is None or ra[0] != rb[0]:
        return False
    _, op_a, va = ra
    _, op_b, vb = rb
    if op_b in (">", ">="):
        if op_a == "=":
            return va > vb if op_b == ">" else va >= vb
        if op_a == ">":
            return va >= vb
        if op_a == ">=":
            return va > vb if op_b == ">" else va >= vb
        return False
    if op_b in ("<", "<="):
        if op_a == "=":
            return va < vb if op_b == "<" else va <= vb
        if op_a == "<":
            return va <= vb
        if op_a == "<=":
            return va < vb if op_b == "<" else va <= vb
        return False
    return False


def _covered(table_conjunct: ast.Node, query_conjuncts: Iterable[ast.Node]) -> bool:
    text = canonical_text(table_conjunct)
    for conj in query_conjuncts:
        if canonical_text(conj) == text or _implies(conj, table_conjunct):
            return True
    return False


def _source_aliases(select: ast.SelectStmt) -> dict[str, str]:
    """Resolved source name -> FROM-clause label (alias or table name)."""
    out: dict[str, str] = {}
    for table in ast.from_tables(select):
        if isinstance(table, ast.TableName):
            out[table.name] = table.alias or table.name
        else:
            out[table.alias] = table.alias
    return out


class _Rewriter:
    """Builds the rewritten select for one (query, record) pair."""

    def __init__(
        self,
        query: SelectBlock,
        record: TempTableRecord,
        probe: bool = False,
        query_identities: dict[str, str] | None = None,
    ):
        self.query = query
        self.record = record
        self.probe = probe
        self.query_identities = query_identities
        self.colmap = dict(record.columns)
        self.used: set[str] = set()
        self.b_sources = set(record.block.sources)
        self.a_aliases = _source_aliases(query.select)
        self.reagg: dict[str, str] = {}
        b_groups = {canonical_text(g) for g in record.block.group_by}
        a_groups = {canonical_text(g) for g in query.group_by}
        self.regroup = record.block.aggregated and a_groups != b_groups

    def check(self) -> None:
        query, record = self.query, self.record
        b = record.block
        if b.select.distinct or b.having_conjuncts:
            raise NoMatch("table has DISTINCT or HAVING")
        if query.outer_join_conjuncts != b.outer_join_conjuncts:
            raise NoMatch("outer join shapes differ")
        a_sources = set(query.sources)
        if not self.b_sources <= a_sources:
            raise NoMatch("table reads sources the query does not")
        if self.query_identities is not None:
            current = self.query_identities
            for name, identity in record.source_identities:
                if current.get(name, name) != identity:
                    raise NoMatch(f"source {name} changed since materialization")
        if b.aggregated:
            if self.b_sources != a_sources:
                raise NoMatch("aggregated table must cover the same sources")
            if not query.aggregated:
                raise NoMatch("row-level query over aggregated table")
            b_groups = {canonical_text(g) for g in b.group_by}
            a_groups = {canonical_text(g) for g in query.group_by}
            if not a_groups <= b_groups:
                raise NoMatch("query grouping does not refine table grouping")
        for conj in b.where_conjuncts:
            if not _covered(conj, self.query.where_conjuncts):
                raise NoMatch("table predicate not covered by query")

    def temp_ref(self, alias: str) -> ast.ColumnRef:
        self.used.add(alias)
        return ast.ColumnRef(self.record.temp_name, alias, source=self.record.temp_name)

    def rw(self, expr: ast.Node) -> ast.Node:
        if isinstance(expr, (ast.Literal, ast.Star)):
            return expr
        if isinstance(expr, (ast.SelectStmt, ast.InSelect, ast.ScalarSelect)):
            raise NoMatch("subqueries are not rewritten")
        key = canonical_text(expr)
        aggregated_table = self.record.block.aggregated
        if (
            isinstance(expr, ast.FuncCall)
            and expr.name in ast.AGGREGATE_FUNCS
            and aggregated_table
        ):
            if key not in self.colmap:
                raise NoMatch("aggregate absent from table outputs")
            column = self.temp_ref(self.colmap[key])
            if not self.regroup:
                return column
            if expr.distinct or expr.name == "avg":
                reason = (
                    "distinct aggregate over pre-aggregated rows"
                    if expr.distinct
                    else "avg cannot be re-aggregated from partials"
                )
                if self.probe:
                    # find_match reports the structural match; the actual
                    # rewrite refuses non-associative re-aggregation.
                    self.reagg[key] = "Unsupported"
                    return column
                raise RewriteUnsupported(reason)
            func, rule = _REAGG[expr.name]
            self.reagg[key] = rule
            return ast.FuncCall(func, (column,))
        if key in self.colmap:
            return self.temp_ref(self.colmap[key])
        if isinstance(expr, ast.ColumnRef):
            if expr.source is not None and expr.source not in self.b_sources:
                label = self.a_aliases.get(expr.source, expr.source)
                return ast.ColumnRef(label, expr.name, source=expr.source)
            raise NoMatch(f"column {key} absent from table outputs")
        return self.rebuild(expr)

    def rebuild(self, expr: ast.Node) -> ast.Node:
        kwargs = {}
        for f in fields(expr):  # type: ignore[arg-type]
            value = getattr(expr, f.name)
            if isinstance(value, ast.Node):
                kwargs[f.name] = self.rw(value)
            elif isinstance(value, tuple) and value and isinstance(value[0], ast.Node):
                kwargs[f.name] = tuple(self.rw(v) for v in value)
            elif isinstance(value, tuple) and value and isinstance(value[0], tuple):
                kwargs[f.name] = tuple(
                    tuple(self.rw(s) if isinstance(s, ast.Node) else s for s in v)
                    for v in value
                )
            else:
                kwargs[f.name] = value
        return replace(expr, **kwargs)  # type: ignore[type-var]

    def residual_conjuncts(self) -> list[ast.Node]:
        table_texts = {canonical_text(c) for c in self.record.block.where_conjuncts}
        return [
            c
            for c in self.query.where_conjuncts
            if canonical_text(c) not in table_texts
        ]

    def build(self) -> tuple[ast.SelectStmt, tuple[str, ...]]:
        query = self.query.select
        record = self.record
        residual = self.residual_conjuncts()

        items = []
        for item in query.items:
            alias = item.alias
            if alias is None and isinstance(item.expr, ast.ColumnRef):
                alias = item.expr.name
            items.append(ast.SelectItem(self.rw(item.expr), alias))

        where = ast.and_of([self.rw(c) for c in residual])

        from_first: ast.TableLike = ast.TableName(record.temp_name)
        joins: list[ast.Join] = []
        if not record.block.aggregated:
            # Tables the record does not cover stay joined alongside it.
            for table in ast.from_tables(query):
                if isinstance(table, ast.TableName) and table.name not in self.b_sources:
                    joins.append(ast.Join("comma", table, None))

        if record.block.aggregated and not self.regroup:
            # Rows already are the query's groups; filters on grouping
            # columns and on aggregates both apply row-wise.
            group_by: tuple[ast.Node, ...] = ()
            having = None
            extra = [self.rw(c) for c in self.query.having_conjuncts]
            where = ast.and_of(list(ast.conjuncts_of(where)) + extra)
        else:
            group_by = tuple(self.rw(g) for g in query.group_by)
            having = (
                ast.and_of([self.rw(c) for c in self.query.having_conjuncts])
                if self.query.having_conjuncts
                else None
            )

        order_by = tuple(
            ast.OrderItem(self.rw_order(o.expr), o.desc) for o in query.order_by
        )

        select = ast.SelectStmt(
            items=tuple(items),
            from_first=from_first,
            joins=tuple(joins),
            where=where,
            group_by=group_by,
            having=having,
            order_by=order_by,
            limit=query.limit,
            distinct=query.distinct,
        )
        residual_texts = tuple(canonical_text(c) for c in residual)
        return select, residual_texts

    def rw_order(self, expr: ast.Node) -> ast.Node:
        # ORDER BY may name a projection alias; those survive unchanged.
        if isinstance(expr, ast.ColumnRef) and expr.source is None:
            return expr
        return self.rw(expr)


def _plan(
    query: SelectBlock,
    record: TempTableRecord,
    probe: bool = False,
    query_identities: dict[str, str] | None = None,
) -> tuple[MatchRewrite, ast.SelectStmt]:
    rewriter = _Rewriter(query, record, probe, query_identities)
    rewriter.check()
    select, residual = rewriter.build()
    dropped = tuple(
        alias for _, alias in record.columns if alias not in rewriter.used
    )
    match = MatchRewrite(
        table=record,
        residual_predicates=residual,
        dropped_columns=dropped,
        re_aggregation=dict(rewriter.reagg),
    )
    return match, select


def find_match(
    query: SelectBlock,
    registry: Iterable[TempTableRecord],
    query_identities: dict[str, str] | None = None,
) -> MatchRewrite | None:
    """Newest-first greedy scan for a record that can answer the query."""
    for record in registry:
        try:
            match, _ = _plan(query, record, probe=True, query_identities=query_identities)
            return match
        except NoMatch:
            continue
    return None


def rewrite(query: SelectBlock, match: MatchRewrite) -> SelectBlock:
    """Answer the query from the matched table; multiset-equal by contract."""
    try:
        _, select = _plan(query, match.table)
    except NoMatch as exc:
        raise RewriteUnsupported(str(exc)) from exc
    sources = tuple(
        sorted(
            {match.table.temp_name}
            | (set(query.sources) - set(match.table.block.sources))
        )
    )
    return replace(query, select=select, sources=sources, depends_on=())


def find_rewrite(
    query: SelectBlock,
    registry: Iterable[TempTableRecord],
    query_identities: dict[str, str] | None = None,
) -> tuple[MatchRewrite, SelectBlock] | None:
    """find_match plus rewrite, skipping records whose rewrite is unsupported."""
    for record in registry:
        try:
            match, select = _plan(query, record, query_identities=query_identities)
        except (NoMatch, RewriteUnsupported):
            continue
        sources = tuple(
            sorted({record.temp_name} | (set(query.sources) - set(record.block.sources)))
        )
        return match, replace(query, select=select, sources=sources, depends_on=())
    return None
