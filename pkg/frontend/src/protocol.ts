/** Wire messages: newline-delimited JSON, one object per line.
 *
 * Client -> server: snapshot {text, cursor, trigger, seq} or close.
 * Server -> client: diff / preview / status / error; every payload carries
 * basisSeq, the snapshot seq it was computed from.
 */

export type Trigger = "poll" | "enter" | "double_enter";

export interface SnapshotMessage {
  type: "snapshot";
  text: string;
  cursor: [number, number]; // [line, column], zero-based
  trigger: Trigger;
  seq: number;
}

export interface CloseMessage {
  type: "close";
}

export interface Hunk {
  old: string;
  new: string;
}

export interface DiffMessage {
  type: "diff";
  hunks: Hunk[];
  overProjected: [string, string][]; // [block name, column]
  basisSeq: number;
}

export interface PreviewMessage {
  type: "preview";
  columns: string[];
  rows: unknown[][];
  approximate: boolean;
  source: "Speculative" | "Direct";
  elapsedMs: number;
  rowsScanned: number;
  basisSeq: number;
}

export interface StatusMessage {
  type: "status";
  dagSummary: DagSummary;
  basisSeq: number;
  note?: string;
}

export interface ErrorMessage {
  type: "error";
  stage: string;
  message: string;
  basisSeq?: number;
}

export interface DagSummary {
  vertexCount: number;
  edgeCount: number;
  byStatus: Record<string, number>;
  tempBytes: number;
  graph: DagExport;
}

export interface DagExport {
  vertices: { id: string; kind: string; status?: string; tempName?: string | null }[];
  edges: { from: string; to: string; kind: string }[];
}

export type ServerMessage = DiffMessage | PreviewMessage | StatusMessage | ErrorMessage;
export type ClientMessage = SnapshotMessage | CloseMessage;

export function encode(message: ClientMessage | ServerMessage): string {
  return JSON.stringify(message) + "\n";
}

export function decode(line: string): ServerMessage {
  const raw: unknown = JSON.parse(line);
  if (typeof raw !== "object" || raw === null || !("type" in raw)) {
    throw new Error("message must be an object with a type");
  }
  const message = raw as { type: string };
  if (!["diff", "preview", "status", "error"].includes(message.type)) {
    throw new Error(`unknown server message type: ${message.type}`);
  }
  return message as ServerMessage;
}

/** Split a byte stream chunk into complete lines, keeping the remainder. */
export class LineSplitter {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const parts = this.buffer.split("\n");
    this.buffer = parts.pop() ?? "";
    return parts.filter((p) => p.length > 0);
  }
}
