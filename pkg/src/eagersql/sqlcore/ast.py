"""AST node definitions for the supported SQL subset.

Nodes are immutable; transformations build new trees. `span` fields carry
character offsets into the source text and are excluded from equality so
that structurally identical trees compare equal regardless of origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Any, Callable, Iterator


class Node:
    """Marker base class for all AST nodes."""

    __slots__ = ()


# --- expressions ---------------------------------------------------------


@dataclass(frozen=True)
class Literal(Node):
    value: Any
    kind: str  # "num" | "str" | "null" | "bool"


@dataclass(frozen=True)
class ColumnRef(Node):
    table: str | None
    name: str
    # Base table or block name the reference resolves to; None until resolved.
    source: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Star(Node):
    table: str | None = None


@dataclass(frozen=True)
class FuncCall(Node):
    name: str
    args: tuple[Node, ...]
    distinct: bool = False
    star: bool = False  # COUNT(*)


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class And(Node):
    items: tuple[Node, ...]


@dataclass(frozen=True)
class Or(Node):
    items: tuple[Node, ...]


@dataclass(frozen=True)
class Not(Node):
    operand: Node


@dataclass(frozen=True)
class IsNull(Node):
    operand: Node
    negated: bool = False


@dataclass(frozen=True)
class InList(Node):
    operand: Node
    items: tuple[Node, ...]
    negated: bool = False


@dataclass(frozen=True)
class InSelect(Node):
    operand: Node
    select: "SelectStmt"
    negated: bool = False


@dataclass(frozen=True)
class Between(Node):
    operand: Node
    low: Node
    high: Node
    negated: bool = False


@dataclass(frozen=True)
class ScalarSelect(Node):
    select: "SelectStmt"


@dataclass(frozen=True)
class Case(Node):
    whens: tuple[tuple[Node, Node], ...]
    default: Node | None = None


# --- relations -----------------------------------------------------------


@dataclass(frozen=True)
class TableName(Node):
    name: str
    alias: str | None = None


@dataclass(frozen=True)
class DerivedTable(Node):
    select: "SelectStmt"
    alias: str


TableLike = TableName | DerivedTable

JOIN_KINDS = ("inner", "left", "right", "cross", "comma")
OUTER_JOIN_KINDS = ("left", "right", "cross")


@dataclass(frozen=True)
class Join(Node):
    kind: str  # one of JOIN_KINDS
    table: TableLike
    on: Node | None = None


@dataclass(frozen=True)
class SelectItem(Node):
    expr: Node
    alias: str | None = None


@dataclass(frozen=True)
class OrderItem(Node):
    expr: Node
    desc: bool = False


@dataclass(frozen=True)
class Cte(Node):
    name: str
    select: "SelectStmt"


@dataclass(frozen=True)
class SelectStmt(Node):
    items: tuple[SelectItem, ...]
    from_first: TableLike | None = None
    joins: tuple[Join, ...] = ()
    where: Node | None = None
    group_by: tuple[Node, ...] = ()
    having: Node | None = None
    order_by: tuple[OrderItem, ...] = ()
    limit: int | None = None
    distinct: bool = False
    ctes: tuple[Cte, ...] = ()
    span: tuple[int, int] | None = field(default=None, compare=False)


# --- statements ----------------------------------------------------------


@dataclass(frozen=True)
class CreateTempTable(Node):
    name: str
    select: SelectStmt


@dataclass(frozen=True)
class DropTable(Node):
    name: str


Statement = SelectStmt | CreateTempTable | DropTable


@dataclass(frozen=True)
class SqlAst:
    """A parsed statement tagged with the dialect it was parsed under."""

    root: Statement
    dialect: str = "generic"

    def with_root(self, root: Statement) -> "SqlAst":
        return replace(self, root=root)


# --- generic traversal ---------------------------------------------------


def children(node: Node) -> Iterator[Node]:
    """Yield direct child nodes, in render order."""
    for f in fields(node):  # type: ignore[arg-type]
        value = getattr(node, f.name)
        if isinstance(value, Node):
            yield value
        elif isinstance(value, tuple):
            for item in value:
                if isinstance(item, Node):
                    yield item
                elif isinstance(item, tuple):  # Case whens
                    for sub in item:
                        if isinstance(sub, Node):
                            yield sub


def walk(node: Node) -> Iterator[Node]:
    """Yield node and all descendants, pre-order."""
    yield node
    for child in children(node):
        yield from walk(child)


def transform(node: Node, fn: Callable[[Node], Node | None]) -> Node:
    """Rebuild a tree bottom-up, letting `fn` replace any node.

    `fn` is called on each node after its children were rebuilt; returning
    None keeps the node as-is.
    """

    def rebuild(value: Any) -> Any:
        if isinstance(value, Node):
            return transform(value, fn)
        if isinstance(value, tuple):
            items = tuple(rebuild(v) for v in value)
            # Preserve identity when nothing changed so `is` checks survive.
            if len(items) == len(value) and all(a is b for a, b in zip(items, value)):
                return value
            return items
        return value

    kwargs = {}
    changed = False
    for f in fields(node):  # type: ignore[arg-type]
        value = getattr(node, f.name)
        new_value = rebuild(value)
        kwargs[f.name] = new_value
        if new_value is not value:
            changed = True
    rebuilt = replace(node, **kwargs) if changed else node  # type: ignore[type-var]
    out = fn(rebuilt)
    return rebuilt if out is None else out


def conjuncts_of(expr: Node | None) -> tuple[Node, ...]:
    """Flatten an AND tree into its conjunct list."""
    if expr is None:
        return ()
    if isinstance(expr, And):
        out: list[Node] = []
        for item in expr.items:
            out.extend(conjuncts_of(item))
        return tuple(out)
    return (expr,)


def and_of(conjuncts: tuple[Node, ...] | list[Node]) -> Node | None:
    """Rebuild an expression from a conjunct list."""
    items = tuple(conjuncts)
    if not items:
        return None
    if len(items) == 1:
        return items[0]
    return And(items)


AGGREGATE_FUNCS = {"sum", "count", "min", "max", "avg"}


def is_aggregate(expr: Node) -> bool:
    """True if the expression contains an aggregate call in its own scope
    (nested subselects aggregate in their own scope and do not count)."""
    if isinstance(expr, FuncCall) and expr.name in AGGREGATE_FUNCS:
        return True
    if isinstance(expr, SelectStmt):
        return False
    return any(is_aggregate(child) for child in children(expr))


def from_tables(select: SelectStmt) -> tuple[TableLike, ...]:
    """All FROM-clause relations of a select, first table included."""
    out: list[TableLike] = []
    if select.from_first is not None:
        out.append(select.from_first)
    out.extend(j.table for j in select.joins)
    return tuple(out)
