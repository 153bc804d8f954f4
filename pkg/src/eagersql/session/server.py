"""Asyncio TCP server speaking newline-delimited JSON, one session per client.

Snapshots are debounced latest-wins: whatever queued up while a pipeline run
was in flight collapses to the newest snapshot.
"""

from __future__ import annotations

import argparse
import asyncio
import sqlite3
from pathlib import Path
from typing import Callable

from eagersql.executor.adapter import SqliteAdapter
from eagersql.session import messages as msg
from eagersql.session.service import Session, SessionConfig
from eagersql.speculator.provider import HttpProvider, MockProvider


def _collapse(items: list[bytes | None]) -> tuple[dict | None, bool, list[dict]]:
    """Latest-wins debounce over a batch of queued lines.

    Returns (newest snapshot or None, whether the client is closing,
    immediate error replies for malformed or unknown messages).
    """
    latest: dict | None = None
    closing = False
    replies: list[dict] = []
    for item in items:
        if item is None:
            closing = True
            continue
        try:
            message = msg.decode(item)
        except msg.ProtocolError as exc:
            replies.append(msg.error_message("protocol", str(exc)))
            continue
        kind = message.get("type")
        if kind == "close":
            closing = True
        elif kind == "snapshot":
            if latest is None or message.get("seq", 0) >= latest.get("seq", 0):
                latest = message
        else:
            replies.append(msg.error_message("protocol", f"unknown message type: {kind!r}"))
    return latest, closing, replies


async def _client(
    reader: asyncio.StreamReader,
    writer: asyncio.StreamWriter,
    make_session: Callable[[], Session],
) -> None:
    session = make_session()
    queue: asyncio.Queue[bytes | None] = asyncio.Queue()

    async def pump() -> None:
        while True:
            line = await reader.readline()
            if not line:
                await queue.put(None)
                return
            await queue.put(line)

    pump_task = asyncio.create_task(pump())
    try:
        closing = False
        while not closing:
            items = [await queue.get()]
            while not queue.empty():
                items.append(queue.get_nowait())
            latest, closing, replies = _collapse(items)
            if latest is not None and not session.closed:
                replies.extend(await asyncio.to_thread(session.ingest, latest))
            for reply in replies:
                writer.write(msg.encode(reply))
            await writer.drain()
    except (ConnectionError, asyncio.IncompleteReadError):
        pass
    finally:
        pump_task.cancel()
        session.teardown()
        writer.close()


async def serve(
    host: str, port: int, make_session: Callable[[], Session]
) -> asyncio.AbstractServer:
    return await asyncio.start_server(
        lambda r, w: _client(r, w, make_session), host, port
    )


def _make_session_factory(args: argparse.Namespace) -> Callable[[], Session]:
    counter = {"n": 0}

    def factory() -> Session:
        counter["n"] += 1
        # Pipelines run on a worker thread; access is serialized per session.
        conn = sqlite3.connect(args.db, check_same_thread=False)
        if args.schema:
            conn.executescript(Path(args.schema).read_text(encoding="utf-8"))
        if args.provider == "remote":
            provider = HttpProvider(args.endpoint, api_key=args.api_key)
        elif args.rulebook:
            provider = MockProvider.from_rulebook(args.rulebook)
        else:
            provider = MockProvider()
        return Session(
            SqliteAdapter(conn),
            provider,
            SessionConfig(session_id=f"c{counter['n']}"),
        )

    return factory


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(
        description="Speculative SQL middleware over a JSON-lines socket"
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=7433)
    parser.add_argument("--db", default=":memory:", help="sqlite database path")
    parser.add_argument("--schema", default=None, help="schema script to apply")
    parser.add_argument("--provider", choices=["mock", "remote"], default="mock")
    parser.add_argument("--rulebook", default=None, help="mock provider rule file")
    parser.add_argument("--endpoint", default=None, help="remote provider URL")
    parser.add_argument("--api-key", default=None)
    args = parser.parse_args(argv)

    async def run() -> None:
        server = await serve(args.host, args.port, _make_session_factory(args))
        addr = server.sockets[0].getsockname()
        print(f"listening on {addr[0]}:{addr[1]}", flush=True)
        async with server:
            await server.serve_forever()

    asyncio.run(run())


if __name__ == "__main__":
    main()
