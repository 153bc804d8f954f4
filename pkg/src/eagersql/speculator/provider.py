"""Language-model provider contract plus the bundled implementations.

Two implementations ship: a deterministic mock driven by a rulebook (CI runs
without network) and a thin HTTP client speaking a chat-completion wire
format.
"""

from __future__ import annotations

import json
import re
import urllib.request
from dataclasses import dataclass, field
from typing import Protocol

from eagersql.speculator import prompts
from eagersql.speculator.prompts import Message


class ProviderError(Exception):
    """Transport-level provider failure."""


class Provider(Protocol):
    def complete(self, messages: list[Message], model: str) -> str: ...


@dataclass(frozen=True)
class Rule:
    """One mock-provider behavior: fires when `match` occurs in the prompt."""

    match: str
    hunks: tuple[tuple[str, str], ...] = ()
    completion: str | None = None


_GROUP_BY_ERROR = re.compile(r"ungrouped columns: (.+)")


@dataclass
class MockProvider:
    """Deterministic scripted provider.

    Rules fire on substring match against the prompt (query text plus error
    message). A built-in fallback repairs the common error taxonomy: dangling
    AND/OR, trailing comma before FROM, unbalanced parentheses, and missing
    GROUP BY columns. Debug requests answer with hunks (local fix) or the
    patched query (rewrite); completion requests answer with the first
    matching rule's completion, else empty.
    """

    rules: list[Rule] = field(default_factory=list)
    builtin_fixes: bool = True
    calls: int = 0

    @classmethod
    def from_rulebook(cls, path: str) -> "MockProvider":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        rules = [
            Rule(
                match=entry["match"],
                hunks=tuple((h["old"], h["new"]) for h in entry.get("hunks", [])),
                completion=entry.get("completion"),
            )
            for entry in raw
        ]
        return cls(rules=rules)

    def complete(self, messages: list[Message], model: str) -> str:
        self.calls += 1
        mode = prompts.extract_mode(messages)
        query = prompts.extract_query(messages)
        if mode == "complete":
            for rule in self.rules:
                if rule.completion is not None and rule.match in query:
                    return rule.completion
            return ""
        error = prompts.extract_error(messages)
        hunks = self._find_hunks(query, error)
        if mode == "local_fix":
            return json.dumps([{"old": old, "new": new} for old, new in hunks])
        patched = query
        for old, new in hunks:
            index = patched.find(old)
            if index >= 0:
                patched = patched[:index] + new + patched[index + len(old):]
        return patched

    def _find_hunks(self, query: str, error: str) -> tuple[tuple[str, str], ...]:
        haystack = query + "\n" + error
        for rule in self.rules:
            if rule.completion is None and rule.match in haystack:
                return rule.hunks
        if self.builtin_fixes:
            return self._builtin(query, error)
        return ()

    def _builtin(self, query: str, error: str) -> tuple[tuple[str, str], ...]:
        stripped = query.rstrip()
        for dangler in (" AND", " OR", " and", " or"):
            if stripped.endswith(dangler):
                # Anchor on trailing context so the first occurrence is the right one.
                tail = stripped[-(len(dangler) + 8):]
                return ((tail, tail[: -len(dangler)]),)
        comma = re.search(r",\s*(FROM|from)\b", query)
        if comma is not None:
            return ((comma.group(0), " " + comma.group(1)),)
        opens, closes = query.count("("), query.count(")")
        if opens > closes:
            tail = stripped[-8:] if stripped else ""
            return ((tail, tail + ")" * (opens - closes)),)
        grouped = _GROUP_BY_ERROR.search(error)
        if grouped is not None:
            columns = grouped.group(1).strip()
            tail = stripped[-8:] if stripped else ""
            return ((tail, f"{tail} GROUP BY {columns}"),)
        return ()


@dataclass
class EchoProvider:
    """Never fixes anything; used to exercise the failure path."""

    calls: int = 0

    def complete(self, messages: list[Message], model: str) -> str:
        self.calls += 1
        mode = prompts.extract_mode(messages)
        if mode == "local_fix":
            return "[]"
        if mode == "complete":
            return ""
        return prompts.extract_query(messages)


@dataclass
class HttpProvider:
    """Chat-completion HTTP client: POST {model, messages} -> {choices: [...]}."""

    endpoint: str
    api_key: str | None = None
    timeout: float = 30.0

    def complete(self, messages: list[Message], model: str) -> str:
        payload = json.dumps({"model": model, "messages": messages}).encode()
        request = urllib.request.Request(
            self.endpoint, data=payload, headers={"Content-Type": "application/json"}
        )
        if self.api_key:
            request.add_header("Authorization", f"Bearer {self.api_key}")
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                body = json.loads(response.read().decode())
        except Exception as exc:  # transport errors surface as DebugFailed upstream
            raise ProviderError(str(exc)) from exc
        if "choices" in body:
            return body["choices"][0]["message"]["content"]
        return body.get("text", "")
