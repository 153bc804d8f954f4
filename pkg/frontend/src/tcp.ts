/** Node transport for the TCP session endpoint. Browser builds should swap
 * in a WebSocket-to-TCP bridge behind the same Transport interface. */

import { createConnection, type Socket } from "node:net";

import type { Transport } from "./client.js";

export class TcpTransport implements Transport {
  private readonly socket: Socket;
  private handler: ((chunk: string) => void) | null = null;

  constructor(host: string, port: number) {
    this.socket = createConnection({ host, port });
    this.socket.setEncoding("utf-8");
    this.socket.on("data", (chunk: string) => {
      this.handler?.(chunk);
    });
  }

  send(line: string): void {
    this.socket.write(line);
  }

  onData(handler: (chunk: string) => void): void {
    this.handler = handler;
  }

  close(): void {
    this.socket.end();
  }
}
