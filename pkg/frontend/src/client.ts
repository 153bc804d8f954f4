/** Editor client: wires the trigger controller and state reducer to a
 * transport speaking the newline-delimited session protocol. Single UI
 * thread; incoming messages are applied as state reducers. */

import { decode, encode, LineSplitter } from "./protocol.js";
import type { ClientMessage } from "./protocol.js";
import { applyEdit, applyMessage, initialState } from "./state.js";
import type { EditorState } from "./state.js";
import { TriggerController } from "./triggers.js";

export interface Transport {
  send(line: string): void;
  onData(handler: (chunk: string) => void): void;
  close(): void;
}

export class EditorClient {
  state: EditorState = initialState();
  readonly triggers = new TriggerController();
  private readonly splitter = new LineSplitter();
  private readonly listeners: ((state: EditorState) => void)[] = [];

  constructor(private readonly transport: Transport) {
    transport.onData((chunk) => {
      for (const line of this.splitter.push(chunk)) {
        this.receive(line);
      }
    });
    this.state = { ...this.state, connected: true };
  }

  subscribe(listener: (state: EditorState) => void): void {
    this.listeners.push(listener);
  }

  edit(text: string, cursor: [number, number]): void {
    this.triggers.onEdit(text, cursor);
    // Edits invalidate in-flight payloads immediately; the next snapshot's
    // seq is the revision those payloads would need to match.
    this.setState(applyEdit(this.state, text, cursor, this.triggers.currentSeq() + 1));
  }

  pressEnter(now: number = Date.now()): void {
    this.dispatch(this.triggers.onEnter(now));
  }

  tick(now: number = Date.now()): void {
    const snapshot = this.triggers.tick(now);
    if (snapshot !== null) {
      this.dispatch(snapshot);
    }
  }

  close(): void {
    this.transport.send(encode({ type: "close" }));
    this.transport.close();
    this.setState({ ...this.state, connected: false });
  }

  private dispatch(message: ClientMessage): void {
    if (message.type === "snapshot") {
      this.setState({ ...this.state, revision: message.seq });
    }
    this.transport.send(encode(message));
  }

  private receive(line: string): void {
    try {
      this.setState(applyMessage(this.state, decode(line)));
    } catch {
      // Unknown payloads are ignored; the protocol may grow message types.
    }
  }

  private setState(next: EditorState): void {
    this.state = next;
    for (const listener of this.listeners) {
      listener(next);
    }
  }
}
