// Audio-only scripted player for Trial Level 1 (pad -> gate -> checkpoint).
// Perception uses nothing but streamed audio events plus the bot's own
// stick state: announcements heard while scrubbing give target bearings,
// fx payloads mark the pad press, the gate opening, and the arrival.
// It never reads poses, entity positions, or the schematic.

import type { AudioEventDoc } from "./protocol.js";
import type { ClientSession } from "./session.js";
import { IDLE_FRAME, type InputFrame } from "./input.js";

const STEP_BATCH = 5;

function stickAt(bearingDeg: number): InputFrame {
  const rad = (bearingDeg * Math.PI) / 180;
  return { ls: { x: 0, y: 0 }, rs: { x: 0.9 * Math.sin(rad), y: 0.9 * Math.cos(rad) }, buttons: {} };
}

export class TrialBot {
  private sentBearing: number | null = null;
  private heard: { payload: string; bearing: number | null }[] = [];

  constructor(private readonly session: ClientSession) {
    session.onAudio = (e) => this.onAudio(e);
  }

  private onAudio(e: AudioEventDoc): void {
    if (e.action === "start" && e.channel === "speech") {
      this.heard.push({ payload: String(e.payload), bearing: this.sentBearing });
    }
  }

  private heardFx(payload: string): boolean {
    return this.session.audioEvents.some(
      (e) => e.channel === "fx" && e.action === "start" && e.payload === payload
    );
  }

  private async ticks(n: number): Promise<void> {
    await this.session.step(n);
  }

  private async drive(frame: InputFrame, ticksN: number): Promise<void> {
    this.session.sendInput(frame);
    await this.ticks(ticksN);
  }

  /** Sweep the full circle slowly; returns payload -> bearing heard at. */
  private async survey(): Promise<Map<string, number>> {
    this.heard = [];
    const steps = 120; // 3 degrees per sample
    for (let i = 0; i <= steps; i++) {
      const bearing = (i * 360) / steps;
      this.sentBearing = bearing % 360;
      this.session.sendInput(stickAt(this.sentBearing));
      await this.ticks(3);
    }
    this.sentBearing = null;
    await this.drive(IDLE_FRAME, 12);
    const found = new Map<string, number>();
    for (const h of this.heard) {
      if (h.bearing !== null && !found.has(h.payload)) found.set(h.payload, h.bearing);
    }
    return found;
  }

  /** Point at the announced bearing, confirm its announcement, auto-turn. */
  private async lockOn(name: string, bearing: number): Promise<void> {
    const before = this.session.audioEvents.length;
    this.session.sendInput(stickAt(bearing));
    let confirmed = false;
    for (let i = 0; i < 120 && !confirmed; i++) {
      await this.ticks(2);
      confirmed = this.session.audioEvents
        .slice(before)
        .some((e) => e.channel === "speech" && e.action === "start" && String(e.payload) === name);
    }
    if (!confirmed) throw new Error(`never confirmed '${name}' on its slice`);
    // still pointing at the slice: auto-turn brings it to 12 o'clock
    this.session.sendInput({ ...stickAt(bearing), buttons: { LB: "down" } });
    await this.ticks(2);
    this.session.sendInput({ ...stickAt(bearing), buttons: { LB: "up" } });
    await this.ticks(2);
    this.session.sendInput(IDLE_FRAME);
    await this.ticks(2);
  }

  private async walkUntil(fx: string, maxBatches = 400): Promise<void> {
    this.session.sendInput({ ...IDLE_FRAME, ls: { x: 0, y: 1 } });
    for (let i = 0; i < maxBatches; i++) {
      await this.ticks(STEP_BATCH);
      if (this.heardFx(fx)) {
        this.session.sendInput(IDLE_FRAME);
        await this.ticks(2);
        return;
      }
    }
    throw new Error(`never heard '${fx}' while walking`);
  }

  private async idleUntil(fx: string, maxBatches = 200): Promise<void> {
    for (let i = 0; i < maxBatches; i++) {
      if (this.heardFx(fx)) return;
      await this.ticks(STEP_BATCH);
    }
    throw new Error(`never heard '${fx}' while waiting`);
  }

  async run(): Promise<void> {
    // find and press the pressure pad
    let targets = await this.survey();
    const pad = targets.get("Pressure Pad");
    if (pad === undefined) throw new Error(`no pad announced; heard ${[...targets.keys()]}`);
    await this.lockOn("Pressure Pad", pad);
    await this.walkUntil("pad_press");
    await this.idleUntil("gate_open");
    // the checkpoint is revealed now: find it and go
    targets = await this.survey();
    const cp = targets.get("Checkpoint");
    if (cp === undefined) throw new Error(`no checkpoint announced; heard ${[...targets.keys()]}`);
    await this.lockOn("Checkpoint", cp);
    await this.walkUntil("checkpoint");
  }
}
