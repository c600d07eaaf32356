// Session protocol: line-delimited JSON messages, duplex, version 1.
// Mirrors the server's message schema; the client is semantically
// passive and only renders what the server streams.

export const PROTOCOL_VERSION = 1;

export interface Vec2Doc {
  x: number;
  y: number;
}

export interface AudioEventDoc {
  action: "start" | "stop";
  channel: "speech" | "nav_tone" | "quest" | "ambient" | "footstep" | "fx";
  event_id: number;
  payload: string | number;
  position: Vec2Doc;
  ref: number | null;
  source: string | null;
  tick: number;
  type: "audio";
}

export interface GameEventDoc {
  data: Record<string, unknown>;
  event_id: number;
  kind: string;
  tick: number;
  type: "game";
}

export interface PoseDoc {
  heading: number;
  x: number;
  y: number;
}

export interface EntityStateDoc {
  alive: boolean;
  id: string;
  x: number;
  y: number;
}

export interface StateDeltaBody {
  entities: EntityStateDoc[];
  events: GameEventDoc[];
  graphics_enabled: boolean;
  pose: PoseDoc;
  scrub_bearing: number | null;
  status: Record<string, unknown>;
  tick: number;
}

export interface SceneSnapshotBody {
  config_tool: string;
  graphics_enabled: boolean;
  pose: PoseDoc;
  scene: Record<string, unknown>;
  scene_index: number;
  status: Record<string, unknown>;
  tick: number;
}

export interface ServerMessage {
  body: Record<string, unknown>;
  kind: "hello" | "scene_snapshot" | "audio_event" | "state_delta" | "ack" | "error";
  seq: number;
  session: string | null;
}

export interface StickDoc {
  x: number;
  y: number;
}

export type ButtonEdges = Record<string, "down" | "up">;

export interface InputBody {
  buttons: ButtonEdges;
  ls: StickDoc;
  rs: StickDoc;
  tick: number;
}

export function decodeServerLine(line: string): ServerMessage {
  const obj = JSON.parse(line);
  if (typeof obj !== "object" || obj === null || typeof obj.kind !== "string") {
    throw new Error(`not a server message: ${line.slice(0, 80)}`);
  }
  return obj as ServerMessage;
}

/** Client-side sequencer: every outbound message gets the next seq. */
export class MessageEncoder {
  private seq = 0;

  constructor(public readonly session: string) {}

  private wrap(kind: string, body: Record<string, unknown>): string {
    this.seq += 1;
    return JSON.stringify({ body, kind, seq: this.seq, session: this.session });
  }

  hello(): string {
    return this.wrap("hello", { protocol: PROTOCOL_VERSION });
  }

  input(body: InputBody): string {
    return this.wrap("input", body as unknown as Record<string, unknown>);
  }

  control(op: string, extra: Record<string, unknown> = {}): string {
    return this.wrap("control", { op, ...extra });
  }
}
