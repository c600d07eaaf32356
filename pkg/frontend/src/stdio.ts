// Node-only transport: runs the engine's stdio session as a subprocess.
// Used by the test suites; the browser entry uses WebSocketTransport.

import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import type { Transport } from "./session.js";

export interface StdioOptions {
  scenes: string[];
  config?: string;
  seed?: number;
  transcriptOut?: string;
  logOut?: string;
  python?: string;
}

export class StdioTransport implements Transport {
  private child: ChildProcessWithoutNullStreams;
  private callbacks: ((line: string) => void)[] = [];
  private buffer = "";
  private exited: Promise<void>;

  constructor(opts: StdioOptions) {
    const args = ["-m", "navstick.cli", "session-stdio", "--scenes", ...opts.scenes];
    if (opts.config) args.push("--config", opts.config);
    if (opts.seed !== undefined) args.push("--seed", String(opts.seed));
    if (opts.transcriptOut) args.push("--transcript-out", opts.transcriptOut);
    if (opts.logOut) args.push("--log-out", opts.logOut);
    this.child = spawn(opts.python ?? "python3", args, { stdio: ["pipe", "pipe", "pipe"] });
    this.child.stdout.setEncoding("utf8");
    this.child.stdout.on("data", (chunk: string) => {
      this.buffer += chunk;
      let idx: number;
      while ((idx = this.buffer.indexOf("\n")) >= 0) {
        const line = this.buffer.slice(0, idx).trim();
        this.buffer = this.buffer.slice(idx + 1);
        if (line) for (const cb of this.callbacks) cb(line);
      }
    });
    this.child.stderr.setEncoding("utf8");
    this.child.stderr.on("data", (chunk: string) => {
      if (chunk.trim()) console.error(`[session-stdio] ${chunk.trim()}`);
    });
    this.exited = new Promise((resolve) => this.child.on("exit", () => resolve()));
  }

  send(line: string): void {
    this.child.stdin.write(line + "\n");
  }

  onLine(cb: (line: string) => void): void {
    this.callbacks.push(cb);
  }

  async close(): Promise<void> {
    this.child.stdin.end(); // EOF ends the session and writes artifacts
    await this.exited;
  }
}
