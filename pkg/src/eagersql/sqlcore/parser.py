"""Recursive-descent parser for the supported SQL subset."""

from __future__ import annotations

from dataclasses import replace

from eagersql.errors import ParseError
from eagersql.sqlcore import ast
from eagersql.sqlcore.tokens import Token, tokenize

DIALECTS = ("generic", "sqlite")

REJECTED_VERBS = {
    "insert", "update", "delete", "alter", "grant", "revoke", "truncate",
    "replace", "merge", "attach", "detach", "pragma", "vacuum", "copy",
    "set", "values",
}

CMP_OPS = {"=", "<>", "<", ">", "<=", ">="}


class _Parser:
    def __init__(self, text: str, tokens: list[Token]):
        self.text = text
        self.tokens = tokens
        self.pos = 0

    # --- token helpers ---

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_kw(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "kw" and tok.value in words

    def accept_kw(self, *words: str) -> bool:
        if self.at_kw(*words):
            self.advance()
            return True
        return False

    def expect_kw(self, word: str) -> Token:
        if not self.at_kw(word):
            raise self.error(f"expected {word.upper()}")
        return self.advance()

    def accept_punct(self, value: str) -> bool:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == value:
            self.advance()
            return True
        return False

    def expect_punct(self, value: str) -> Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.value != value:
            raise self.error(f"expected {value!r}")
        return self.advance()

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        shown = tok.value or "end of input"
        return ParseError(f"{message}, got {shown!r}", tok.position, tok.line, tok.column)

    # --- statements ---

    def statement(self) -> ast.Statement:
        tok = self.peek()
        if tok.kind == "kw" and tok.value in REJECTED_VERBS:
            raise self.error(f"unsupported statement verb {tok.value.upper()}")
        if self.at_kw("create"):
            stmt: ast.Statement = self.create_temp_table()
        elif self.at_kw("drop"):
            stmt = self.drop_table()
        elif self.at_kw("select", "with"):
            stmt = self.select_stmt()
        else:
            raise self.error("expected SELECT, WITH, CREATE or DROP")
        self.accept_punct(";")
        if self.peek().kind != "eof":
            raise self.error("unexpected trailing input")
        return stmt

    def create_temp_table(self) -> ast.CreateTempTable:
        self.expect_kw("create")
        if not (self.accept_kw("temporary") or self.accept_kw("temp")):
            raise self.error("only CREATE TEMPORARY TABLE is supported")
        self.expect_kw("table")
        name = self.identifier("table name")
        self.expect_kw("as")
        select = self.select_stmt()
        return ast.CreateTempTable(name, select)

    def drop_table(self) -> ast.DropTable:
        self.expect_kw("drop")
        self.expect_kw("table")
        self.accept_kw("exists")  # tolerate DROP TABLE IF EXISTS
        return ast.DropTable(self.identifier("table name"))

    def identifier(self, what: str) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error(f"expected {what}")
        self.advance()
        return tok.value

    # --- SELECT ---

    def select_stmt(self) -> ast.SelectStmt:
        start = self.peek().position
        ctes: list[ast.Cte] = []
        if self.accept_kw("with"):
            while True:
                name = self.identifier("CTE name")
                self.expect_kw("as")
                self.expect_punct("(")
                inner = self.select_stmt()
                self.expect_punct(")")
                ctes.append(ast.Cte(name, inner))
                if not self.accept_punct(","):
                    break
        select = self.select_core()
        if self.at_kw("union", "intersect", "except"):
            raise self.error("set operations are not supported")
        end = self.tokens[self.pos - 1].position + len(self.tokens[self.pos - 1].value)
        return replace(select, ctes=tuple(ctes), span=(start, end))

    def select_core(self) -> ast.SelectStmt:
        start = self.peek().position
        self.expect_kw("select")
        distinct = self.accept_kw("distinct")
        self.accept_kw("all")
        items = [self.select_item()]
        while self.accept_punct(","):
            items.append(self.select_item())
        from_first: ast.TableLike | None = None
        joins: list[ast.Join] = []
        if self.accept_kw("from"):
            from_first = self.table_primary()
            while True:
                if self.accept_punct(","):
                    joins.append(ast.Join("comma", self.table_primary(), None))
                    continue
                kind = self.join_kind()
                if kind is None:
                    break
                table = self.table_primary()
                on = None
                if self.accept_kw("on"):
                    on = self.expr()
                elif kind in ("inner", "left", "right"):
                    raise self.error(f"{kind.upper()} JOIN requires an ON clause")
                joins.append(ast.Join(kind, table, on))
        where = self.expr() if self.accept_kw("where") else None
        group_by: list[ast.Node] = []
        if self.accept_kw("group"):
            self.expect_kw("by")
            group_by.append(self.expr())
            while self.accept_punct(","):
                group_by.append(self.expr())
        having = self.expr() if self.accept_kw("having") else None
        order_by: list[ast.OrderItem] = []
        if self.accept_kw("order"):
            self.expect_kw("by")
            while True:
                expr = self.expr()
                desc = False
                if self.accept_kw("desc"):
                    desc = True
                else:
                    self.accept_kw("asc")
                order_by.append(ast.OrderItem(expr, desc))
                if not self.accept_punct(","):
                    break
        limit: int | None = None
        if self.accept_kw("limit"):
            tok = self.peek()
            if tok.kind != "num" or "." in tok.value:
                raise self.error("expected integer after LIMIT")
            self.advance()
            limit = int(tok.value)
        end = self.tokens[self.pos - 1].position + len(self.tokens[self.pos - 1].value)
        return ast.SelectStmt(
            items=tuple(items),
            from_first=from_first,
            joins=tuple(joins),
            where=where,
            group_by=tuple(group_by),
            having=having,
            order_by=tuple(order_by),
            limit=limit,
            distinct=distinct,
            span=(start, end),
        )

    def join_kind(self) -> str | None:
        if self.accept_kw("join"):
            return "inner"
        if self.at_kw("inner") and self.peek(1).value == "join":
            self.advance()
            self.advance()
            return "inner"
        for kind in ("left", "right"):
            if self.at_kw(kind):
                nxt = self.peek(1)
                if nxt.value == "join" or (nxt.value == "outer" and self.peek(2).value == "join"):
                    self.advance()
                    self.accept_kw("outer")
                    self.expect_kw("join")
                    return kind
        if self.at_kw("cross") and self.peek(1).value == "join":
            self.advance()
            self.advance()
            return "cross"
        if self.at_kw("full"):
            raise self.error("FULL JOIN is not supported")
        return None

    def select_item(self) -> ast.SelectItem:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "*":
            self.advance()
            return ast.SelectItem(ast.Star())
        if (
            tok.kind == "ident"
            and self.peek(1).value == "."
            and self.peek(2).kind == "punct"
            and self.peek(2).value == "*"
        ):
            self.advance()
            self.advance()
            self.advance()
            return ast.SelectItem(ast.Star(tok.value))
        expr = self.expr()
        alias = None
        if self.accept_kw("as"):
            alias = self.identifier("alias")
        elif self.peek().kind == "ident":
            alias = self.identifier("alias")
        return ast.SelectItem(expr, alias)

    def table_primary(self) -> ast.TableLike:
        if self.accept_punct("("):
            select = self.select_stmt()
            self.expect_punct(")")
            self.accept_kw("as")
            alias = self.identifier("derived table alias")
            return ast.DerivedTable(select, alias)
        name = self.identifier("table name")
        alias = None
        if self.accept_kw("as"):
            alias = self.identifier("alias")
        elif self.peek().kind == "ident":
            alias = self.identifier("alias")
        return ast.TableName(name, alias)

    # --- expressions ---

    def expr(self) -> ast.Node:
        return self.or_expr()

    def or_expr(self) -> ast.Node:
        items = [self.and_expr()]
        while self.accept_kw("or"):
            items.append(self.and_expr())
        return items[0] if len(items) == 1 else ast.Or(tuple(items))

    def and_expr(self) -> ast.Node:
        items = [self.not_expr()]
        while self.accept_kw("and"):
            items.append(self.not_expr())
        return items[0] if len(items) == 1 else ast.And(tuple(items))

    def not_expr(self) -> ast.Node:
        if self.accept_kw("not"):
            return ast.Not(self.not_expr())
        return self.predicate()

    def predicate(self) -> ast.Node:
        left = self.additive()
        tok = self.peek()
        if tok.kind == "op" and tok.value in CMP_OPS:
            self.advance()
            right = self.additive()
            return ast.BinOp(tok.value, left, right)
        if self.accept_kw("is"):
            negated = self.accept_kw("not")
            self.expect_kw("null")
            return ast.IsNull(left, negated)
        negated = False
        if self.at_kw("not") and self.peek(1).value in ("in", "between", "like"):
            self.advance()
            negated = True
        if self.accept_kw("in"):
            self.expect_punct("(")
            if self.at_kw("select", "with"):
                select = self.select_stmt()
                self.expect_punct(")")
                return ast.InSelect(left, select, negated)
            items = [self.additive()]
            while self.accept_punct(","):
                items.append(self.additive())
            self.expect_punct(")")
            return ast.InList(left, tuple(items), negated)
        if self.accept_kw("between"):
            low = self.additive()
            self.expect_kw("and")
            high = self.additive()
            node: ast.Node = ast.Between(left, low, high, negated)
            return node
        if self.accept_kw("like"):
            pattern = self.additive()
            node = ast.BinOp("like", left, pattern)
            return ast.Not(node) if negated else node
        if negated:
            raise self.error("expected IN, BETWEEN or LIKE after NOT")
        return left

    def additive(self) -> ast.Node:
        left = self.multiplicative()
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.value in ("+", "-"):
                self.advance()
                left = ast.BinOp(tok.value, left, self.multiplicative())
            else:
                return left

    def multiplicative(self) -> ast.Node:
        left = self.unary()
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.value in ("*", "/", "%"):
                self.advance()
                left = ast.BinOp(tok.value, left, self.unary())
            else:
                return left

    def unary(self) -> ast.Node:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "-":
            self.advance()
            operand = self.unary()
            if isinstance(operand, ast.Literal) and operand.kind == "num":
                return ast.Literal(-operand.value, "num")
            return ast.BinOp("-", ast.Literal(0, "num"), operand)
        return self.primary()

    def primary(self) -> ast.Node:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            value = float(tok.value) if "." in tok.value else int(tok.value)
            return ast.Literal(value, "num")
        if tok.kind == "str":
            self.advance()
            return ast.Literal(tok.value, "str")
        if self.accept_kw("null"):
            return ast.Literal(None, "null")
        if self.accept_kw("true"):
            return ast.Literal(True, "bool")
        if self.accept_kw("false"):
            return ast.Literal(False, "bool")
        if self.at_kw("case"):
            return self.case_expr()
        if self.accept_punct("("):
            if self.at_kw("select", "with"):
                select = self.select_stmt()
                self.expect_punct(")")
                return ast.ScalarSelect(select)
            inner = self.expr()
            self.expect_punct(")")
            return inner
        if tok.kind == "ident":
            self.advance()
            if self.accept_punct("("):
                return self.finish_func_call(tok.value)
            if self.accept_punct("."):
                col = self.peek()
                if col.kind != "ident":
                    raise self.error("expected column name after '.'")
                self.advance()
                return ast.ColumnRef(tok.value, col.value)
            return ast.ColumnRef(None, tok.value)
        raise self.error("expected expression")

    def finish_func_call(self, name: str) -> ast.FuncCall:
        if self.accept_punct("*"):
            self.expect_punct(")")
            return ast.FuncCall(name, (), star=True)
        distinct = self.accept_kw("distinct")
        args: list[ast.Node] = []
        if not self.accept_punct(")"):
            args.append(self.expr())
            while self.accept_punct(","):
                args.append(self.expr())
            self.expect_punct(")")
        return ast.FuncCall(name, tuple(args), distinct=distinct)

    def case_expr(self) -> ast.Case:
        self.expect_kw("case")
        whens: list[tuple[ast.Node, ast.Node]] = []
        while self.accept_kw("when"):
            cond = self.expr()
            self.expect_kw("then")
            whens.append((cond, self.expr()))
        if not whens:
            raise self.error("CASE requires at least one WHEN branch")
        default = self.expr() if self.accept_kw("else") else None
        self.expect_kw("end")
        return ast.Case(tuple(whens), default)


def parse(text: str, dialect: str = "generic") -> ast.SqlAst:
    """Parse query text into an AST, raising ParseError with position info."""
    if dialect not in DIALECTS:
        raise ValueError(f"unknown dialect {dialect!r}")
    if not text.strip():
        raise ParseError("empty query text", 0)
    tokens = tokenize(text)
    parser = _Parser(text, tokens)
    return ast.SqlAst(parser.statement(), dialect)
