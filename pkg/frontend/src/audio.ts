// Audio rendering: every sound corresponds 1:1 to a server audio event.
// nav_tone events drive sine oscillators at the event's frequency;
// speech events drive the platform synthesizer and are cancelled on the
// matching stop (the engine's log is the source of truth for duration).
// Sources are panned from the event position relative to the player
// pose; sources anchored to an entity follow it via state deltas.

import type { AudioEventDoc, EntityStateDoc, PoseDoc, Vec2Doc } from "./protocol.js";

export interface OscillatorLike {
  frequency: { value: number };
  type: string;
  connect(node: unknown): void;
  start(): void;
  stop(): void;
}

export interface GainLike {
  gain: { value: number };
  connect(node: unknown): void;
}

export interface PannerLike {
  pan: { value: number };
  connect(node: unknown): void;
}

export interface AudioContextLike {
  createOscillator(): OscillatorLike;
  createGain(): GainLike;
  createStereoPanner(): PannerLike;
  destination: unknown;
}

export interface SpeechHandle {
  cancelled: boolean;
}

export interface SpeechBackend {
  speak(text: string, pan: number, gain: number): SpeechHandle;
  cancel(handle: SpeechHandle): void;
}

// Channels without an intrinsic frequency get fixed cue tones.
const CHANNEL_TONES: Record<string, number> = {
  quest: 1760,
  ambient: 220,
  footstep: 110,
  fx: 880,
};

interface ActiveSource {
  event: AudioEventDoc;
  osc?: OscillatorLike;
  gain?: GainLike;
  panner?: PannerLike;
  speech?: SpeechHandle;
}

export function spatialize(position: Vec2Doc, pose: PoseDoc): { pan: number; gain: number } {
  const dx = position.x - pose.x;
  const dy = position.y - pose.y;
  const world = (Math.atan2(dx, dy) * 180) / Math.PI;
  const bearing = (((world - pose.heading) % 360) + 360) % 360;
  const rad = (bearing * Math.PI) / 180;
  const dist = Math.hypot(dx, dy);
  return { pan: Math.sin(rad), gain: 1 / (1 + dist * 0.15) };
}

export class AudioRenderer {
  private active = new Map<number, ActiveSource>();
  private pose: PoseDoc = { heading: 0, x: 0, y: 0 };
  readonly rendered: AudioEventDoc[] = [];

  constructor(private readonly ctx: AudioContextLike, private readonly speech: SpeechBackend) {}

  setPose(pose: PoseDoc): void {
    this.pose = pose;
    this.retarget();
  }

  /** Entity-anchored sources follow their entity between events. */
  updateEntities(entities: EntityStateDoc[]): void {
    const byId = new Map(entities.map((e) => [e.id, e]));
    for (const src of this.active.values()) {
      const anchor = src.event.source ? byId.get(src.event.source) : undefined;
      if (anchor) src.event = { ...src.event, position: { x: anchor.x, y: anchor.y } };
    }
    this.retarget();
  }

  private retarget(): void {
    for (const src of this.active.values()) {
      const { pan, gain } = spatialize(src.event.position, this.pose);
      if (src.panner) src.panner.pan.value = pan;
      if (src.gain) src.gain.gain.value = gain;
    }
  }

  render(e: AudioEventDoc): void {
    this.rendered.push(e);
    if (e.action === "stop") {
      const src = e.ref === null ? undefined : this.active.get(e.ref);
      if (!src) return;
      this.active.delete(e.ref as number);
      if (src.osc) src.osc.stop();
      if (src.speech) this.speech.cancel(src.speech); // truncation is audible
      return;
    }
    const { pan, gain } = spatialize(e.position, this.pose);
    if (e.channel === "speech") {
      const handle = this.speech.speak(String(e.payload), pan, gain);
      this.active.set(e.event_id, { event: e, speech: handle });
      return;
    }
    const freq = e.channel === "nav_tone" ? Number(e.payload) : CHANNEL_TONES[e.channel] ?? 660;
    const osc = this.ctx.createOscillator();
    osc.type = "sine";
    osc.frequency.value = freq;
    const g = this.ctx.createGain();
    g.gain.value = gain;
    const p = this.ctx.createStereoPanner();
    p.pan.value = pan;
    osc.connect(g);
    g.connect(p);
    p.connect(this.ctx.destination);
    osc.start();
    this.active.set(e.event_id, { event: e, osc, gain: g, panner: p });
  }

  get activeCount(): number {
    return this.active.size;
  }
}

/** Browser speech backend on top of speechSynthesis. */
export class BrowserSpeech implements SpeechBackend {
  speak(text: string, pan: number, gain: number): SpeechHandle {
    const handle: SpeechHandle = { cancelled: false };
    const utter = new SpeechSynthesisUtterance(text);
    utter.volume = Math.min(1, gain);
    speechSynthesis.speak(utter);
    return handle;
  }

  cancel(handle: SpeechHandle): void {
    handle.cancelled = true;
    speechSynthesis.cancel();
  }
}
