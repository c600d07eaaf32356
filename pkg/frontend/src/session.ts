// Client session: handshake, input forwarding, and a promise-based view
// over the inbound stream so scripted drivers can await protocol state.

import type {
  AudioEventDoc,
  GameEventDoc,
  SceneSnapshotBody,
  ServerMessage,
  StateDeltaBody,
} from "./protocol.js";
import { MessageEncoder } from "./protocol.js";
import type { InputFrame } from "./input.js";

export interface Transport {
  send(line: string): void;
  onLine(cb: (line: string) => void): void;
  close(): Promise<void> | void;
}

type Waiter = { predicate: (msg: ServerMessage) => boolean; resolve: (msg: ServerMessage) => void };

export class ClientSession {
  readonly encoder: MessageEncoder;
  snapshot: SceneSnapshotBody | null = null;
  lastDelta: StateDeltaBody | null = null;
  graphicsEnabled = true;
  readonly audioEvents: AudioEventDoc[] = [];
  readonly gameEvents: GameEventDoc[] = [];
  readonly errors: string[] = [];
  onAudio: (e: AudioEventDoc) => void = () => {};
  onDelta: (d: StateDeltaBody) => void = () => {};
  onSnapshot: (s: SceneSnapshotBody) => void = () => {};
  private waiters: Waiter[] = [];
  private deltasSeen = 0;

  constructor(private readonly transport: Transport, session = "web-1") {
    this.encoder = new MessageEncoder(session);
    transport.onLine((line) => this.handle(JSON.parse(line) as ServerMessage));
  }

  private handle(msg: ServerMessage): void {
    switch (msg.kind) {
      case "scene_snapshot": {
        this.snapshot = msg.body as unknown as SceneSnapshotBody;
        this.graphicsEnabled = this.snapshot.graphics_enabled;
        this.onSnapshot(this.snapshot);
        break;
      }
      case "audio_event": {
        const e = msg.body as unknown as AudioEventDoc;
        this.audioEvents.push(e);
        this.onAudio(e);
        break;
      }
      case "state_delta": {
        const d = msg.body as unknown as StateDeltaBody;
        this.lastDelta = d;
        this.deltasSeen += 1;
        this.graphicsEnabled = d.graphics_enabled;
        for (const g of d.events) this.gameEvents.push(g);
        this.onDelta(d);
        break;
      }
      case "error": {
        this.errors.push(String(msg.body.message ?? "unknown error"));
        break;
      }
      default:
        break;
    }
    this.waiters = this.waiters.filter((w) => {
      if (w.predicate(msg)) {
        w.resolve(msg);
        return false;
      }
      return true;
    });
  }

  waitFor(predicate: (msg: ServerMessage) => boolean, timeoutMs = 10_000): Promise<ServerMessage> {
    return new Promise((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error("timed out waiting for message")), timeoutMs);
      this.waiters.push({
        predicate,
        resolve: (msg) => {
          clearTimeout(timer);
          resolve(msg);
        },
      });
    });
  }

  async hello(): Promise<SceneSnapshotBody> {
    const snap = this.waitFor((m) => m.kind === "scene_snapshot");
    this.transport.send(this.encoder.hello());
    await snap;
    return this.snapshot as SceneSnapshotBody;
  }

  sendInput(frame: InputFrame): void {
    this.transport.send(
      this.encoder.input({
        buttons: frame.buttons,
        ls: frame.ls,
        rs: frame.rs,
        tick: this.lastDelta?.tick ?? 0,
      })
    );
  }

  control(op: string, extra: Record<string, unknown> = {}): void {
    this.transport.send(this.encoder.control(op, extra));
  }

  /** Headless clock: ask for N ticks and wait until their deltas land. */
  async step(ticks: number): Promise<void> {
    const target = this.deltasSeen + ticks;
    const done = this.waitFor((m) => m.kind === "state_delta" && this.deltasSeen >= target);
    this.control("step", { ticks });
    await done;
  }

  async close(): Promise<void> {
    await this.transport.close();
  }
}
