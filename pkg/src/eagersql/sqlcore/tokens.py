"""SQL tokenizer with position tracking."""

from __future__ import annotations

from dataclasses import dataclass

from eagersql.errors import ParseError

KEYWORDS = {
    "select", "from", "where", "group", "by", "having", "order", "limit",
    "as", "and", "or", "not", "in", "is", "null", "between", "like",
    "join", "inner", "left", "right", "full", "outer", "cross", "on",
    "with", "distinct", "asc", "desc", "case", "when", "then", "else",
    "end", "true", "false", "create", "temporary", "temp", "table",
    "drop", "union", "all", "intersect", "except", "exists",
    # Recognized only so DML/DDL can be rejected with a clear error.
    "insert", "update", "delete", "alter", "grant", "revoke", "truncate",
    "replace", "merge", "attach", "detach", "pragma", "vacuum", "copy",
    "set", "values", "into",
}

PUNCT = {",", "(", ")", ".", "*", "+", "-", "/", "%", ";", "?"}


@dataclass(frozen=True)
class Token:
    kind: str  # "kw" | "ident" | "num" | "str" | "op" | "punct" | "eof"
    value: str
    position: int
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    line_start = 0
    n = len(text)

    def err(message: str, pos: int) -> ParseError:
        return ParseError(message, pos, line, pos - line_start + 1)

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            line_start = i
            continue
        if ch.isspace():
            i += 1
            continue
        if text.startswith("--", i):
            end = text.find("\n", i)
            i = n if end < 0 else end
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i)
            if end < 0:
                raise err("unterminated block comment", i)
            line += text.count("\n", i, end)
            i = end + 2
            continue
        col = i - line_start + 1
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j].lower()
            kind = "kw" if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, i, line, col))
            i = j
            continue
        if ch == '"':  # quoted identifier
            j = text.find('"', i + 1)
            if j < 0:
                raise err("unterminated quoted identifier", i)
            tokens.append(Token("ident", text[i + 1 : j].lower(), i, line, col))
            i = j + 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            tokens.append(Token("num", text[i:j], i, line, col))
            i = j
            continue
        if ch == "'":
            j = i + 1
            parts: list[str] = []
            while True:
                if j >= n:
                    raise err("unterminated string literal", i)
                if text[j] == "'":
                    if j + 1 < n and text[j + 1] == "'":
                        parts.append("'")
                        j += 2
                        continue
                    break
                parts.append(text[j])
                j += 1
            tokens.append(Token("str", "".join(parts), i, line, col))
            i = j + 1
            continue
        for op in ("<>", "!=", ">=", "<=", "=", "<", ">"):
            if text.startswith(op, i):
                tokens.append(Token("op", "<>" if op == "!=" else op, i, line, col))
                i += len(op)
                break
        else:
            if ch in PUNCT:
                tokens.append(Token("punct", ch, i, line, col))
                i += 1
            else:
                raise err(f"unexpected character {ch!r}", i)
    tokens.append(Token("eof", "", n, line, n - line_start + 1))
    return tokens
