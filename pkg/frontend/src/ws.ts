// Browser transport: one websocket, one message per frame.

import type { Transport } from "./session.js";

export class WebSocketTransport implements Transport {
  private ws: WebSocket;
  private callbacks: ((line: string) => void)[] = [];
  readonly ready: Promise<void>;

  constructor(url: string) {
    this.ws = new WebSocket(url);
    this.ready = new Promise((resolve, reject) => {
      this.ws.onopen = () => resolve();
      this.ws.onerror = () => reject(new Error(`cannot connect to ${url}`));
    });
    this.ws.onmessage = (ev) => {
      for (const cb of this.callbacks) cb(String(ev.data));
    };
  }

  send(line: string): void {
    this.ws.send(line);
  }

  onLine(cb: (line: string) => void): void {
    this.callbacks.push(cb);
  }

  close(): void {
    this.ws.close();
  }
}
