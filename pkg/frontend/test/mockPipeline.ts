/** In-process mock of the session endpoint: speaks the wire protocol and
 * answers every snapshot with diff, preview, and status, echoing the
 * snapshot's seq as basisSeq. `delayMs` simulates server latency so tests
 * can race replies against edits. */

import type { Transport } from "../src/client.js";
import { encode } from "../src/protocol.js";
import type { ServerMessage, SnapshotMessage } from "../src/protocol.js";

export class MockPipeline implements Transport {
  received: SnapshotMessage[] = [];
  closed = false;
  private handler: ((chunk: string) => void) | null = null;

  constructor(private readonly delayMs = 0) {}

  send(line: string): void {
    const message = JSON.parse(line) as { type: string };
    if (message.type === "close") {
      this.closed = true;
      return;
    }
    if (message.type !== "snapshot") {
      return;
    }
    const snapshot = message as SnapshotMessage;
    this.received.push(snapshot);
    const replies = this.repliesFor(snapshot);
    if (this.delayMs === 0) {
      replies.forEach((r) => this.deliver(r));
    } else {
      setTimeout(() => replies.forEach((r) => this.deliver(r)), this.delayMs);
    }
  }

  onData(handler: (chunk: string) => void): void {
    this.handler = handler;
  }

  close(): void {
    this.closed = true;
  }

  deliver(message: ServerMessage): void {
    this.handler?.(encode(message));
  }

  private repliesFor(snapshot: SnapshotMessage): ServerMessage[] {
    const speculated = snapshot.text.includes("WHERE")
      ? []
      : [{ old: snapshot.text, new: snapshot.text + "\nWHERE price > 10" }];
    return [
      {
        type: "diff",
        hunks: speculated,
        overProjected: [["main", "quantity"]],
        basisSeq: snapshot.seq,
      },
      {
        type: "preview",
        columns: ["item", "price"],
        rows: [
          ["apple", 3.5],
          ["pear", 4.25],
        ],
        approximate: false,
        source: "Speculative",
        elapsedMs: 1.2,
        rowsScanned: 16,
        basisSeq: snapshot.seq,
      },
      {
        type: "status",
        dagSummary: {
          vertexCount: 2,
          edgeCount: 1,
          byStatus: { Created: 1, Pending: 1 },
          tempBytes: 2048,
          graph: {
            vertices: [
              { id: "tb_1", kind: "TempTable", status: "Created" },
              { id: "pv_1", kind: "Preview" },
            ],
            edges: [{ from: "tb_1", to: "pv_1", kind: "Dependency" }],
          },
        },
        basisSeq: snapshot.seq,
      },
    ];
  }
}
