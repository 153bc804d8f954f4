"""Prompt construction for the language-model provider.

Prompts carry only identifiers (schema names, historical query text, user
text) — never row data. The section markers double as the parsing contract
for the scripted mock provider.
"""

from __future__ import annotations

from eagersql.sqlcore.resolve import SchemaCatalog

QUERY_OPEN = "<<<QUERY"
QUERY_CLOSE = "QUERY>>>"

Message = dict[str, str]


def schema_summary(catalog: SchemaCatalog) -> str:
    return "; ".join(
        f"{table}({', '.join(cols)})" for table, cols in sorted(catalog.tables.items())
    )


def build_debug_prompt(
    query: str,
    error: str,
    catalog: SchemaCatalog,
    neighbors: list[str],
    dialect: str,
    mode: str,  # "local_fix" | "rewrite"
) -> list[Message]:
    instruction = (
        "Return a JSON list of minimal replacement hunks, e.g. "
        '[{"old": "SELECT a, FROM", "new": "SELECT a FROM"}].'
        if mode == "local_fix"
        else "Return the corrected SQL query in full, with minimal changes."
    )
    body = "\n".join(
        [
            f"DIALECT: {dialect}",
            f"SCHEMA: {schema_summary(catalog)}",
            f"HISTORY: {' | '.join(neighbors)}",
            f"MODE: {mode}",
            QUERY_OPEN,
            query,
            QUERY_CLOSE,
            f"ERROR: {error}",
        ]
    )
    return [
        {"role": "system", "content": f"You fix broken SQL queries. {instruction}"},
        {"role": "user", "content": body},
    ]


def build_completion_prompt(
    query: str,
    cursor_offset: int,
    catalog: SchemaCatalog,
    neighbors: list[str],
    dialect: str,
) -> list[Message]:
    marked = query[:cursor_offset] + "‸" + query[cursor_offset:]
    body = "\n".join(
        [
            f"DIALECT: {dialect}",
            f"SCHEMA: {schema_summary(catalog)}",
            f"HISTORY: {' | '.join(neighbors)}",
            "MODE: complete",
            QUERY_OPEN,
            marked,
            QUERY_CLOSE,
        ]
    )
    return [
        {
            "role": "system",
            "content": "Predict what the user types next at the caret; reply with the continuation only.",
        },
        {"role": "user", "content": body},
    ]


def extract_query(messages: list[Message]) -> str:
    """Pull the query text back out of a prompt (mock-provider side)."""
    content = messages[-1]["content"]
    start = content.find(QUERY_OPEN)
    end = content.find(QUERY_CLOSE)
    if start < 0 or end < 0:
        return ""
    return content[start + len(QUERY_OPEN): end].strip("\n")


def extract_mode(messages: list[Message]) -> str:
    for line in messages[-1]["content"].splitlines():
        if line.startswith("MODE: "):
            return line[len("MODE: "):]
    return ""


def extract_error(messages: list[Message]) -> str:
    content = messages[-1]["content"]
    index = content.find("ERROR: ")
    return content[index + len("ERROR: "):] if index >= 0 else ""
