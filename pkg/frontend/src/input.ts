// Input sources: real gamepad, keyboard fallback, and a scripted stub
// for tests. All produce the same frame shape; the server owns deadzone
// handling and sample-and-hold, so frames are raw.

import type { ButtonEdges, StickDoc } from "./protocol.js";

export interface InputFrame {
  ls: StickDoc;
  rs: StickDoc;
  buttons: ButtonEdges;
}

export interface InputSource {
  poll(): InputFrame;
}

export const IDLE_FRAME: InputFrame = { ls: { x: 0, y: 0 }, rs: { x: 0, y: 0 }, buttons: {} };

// Standard-mapping gamepad indices -> protocol button names.
// L1 is the auto-turn/teleport bumper; Back/Select opens the menu.
const GAMEPAD_BUTTONS: Record<number, string> = {
  4: "LB",
  5: "RB",
  6: "LT",
  7: "RT",
  8: "LShoulder",
  12: "DPadUp",
  13: "DPadDown",
};

export class GamepadInput implements InputSource {
  private pressed = new Set<string>();

  constructor(private readonly getGamepads: () => (Gamepad | null)[] = () => navigator.getGamepads()) {}

  poll(): InputFrame {
    const pads = this.getGamepads().filter((p): p is Gamepad => p !== null);
    if (pads.length === 0) {
      // device lost: zeroed samples; the page shows a warning separately
      return { ...IDLE_FRAME, buttons: this.releaseAll() };
    }
    const pad = pads[0];
    const buttons: ButtonEdges = {};
    for (const [index, name] of Object.entries(GAMEPAD_BUTTONS)) {
      const down = pad.buttons[Number(index)]?.pressed ?? false;
      const was = this.pressed.has(name);
      if (down && !was) {
        this.pressed.add(name);
        buttons[name] = "down";
      } else if (!down && was) {
        this.pressed.delete(name);
        buttons[name] = "up";
      }
    }
    return {
      // pad y axes grow downward; forward is positive in the protocol
      ls: { x: pad.axes[0] ?? 0, y: -(pad.axes[1] ?? 0) },
      rs: { x: pad.axes[2] ?? 0, y: -(pad.axes[3] ?? 0) },
      buttons,
    };
  }

  private releaseAll(): ButtonEdges {
    const out: ButtonEdges = {};
    for (const name of this.pressed) out[name] = "up";
    this.pressed.clear();
    return out;
  }
}

// Keyboard fallback: WASD drives the left stick, arrows the right stick
// (unit vectors), with Tab=menu, [=LB, ]=RB, Shift=LT, Space=RT,
// PageUp/PageDown = D-pad.
const KEY_BUTTONS: Record<string, string> = {
  Tab: "LShoulder",
  BracketLeft: "LB",
  BracketRight: "RB",
  ShiftLeft: "LT",
  Space: "RT",
  PageUp: "DPadUp",
  PageDown: "DPadDown",
};

export class KeyboardInput implements InputSource {
  private keys = new Set<string>();
  private edges: ButtonEdges = {};

  attach(target: { addEventListener(type: string, cb: (e: KeyboardEvent) => void): void }): void {
    target.addEventListener("keydown", (e) => this.onKey(e.code, true));
    target.addEventListener("keyup", (e) => this.onKey(e.code, false));
  }

  onKey(code: string, down: boolean): void {
    if (down) this.keys.add(code);
    else this.keys.delete(code);
    const name = KEY_BUTTONS[code];
    if (name) this.edges[name] = down ? "down" : "up";
  }

  poll(): InputFrame {
    const axis = (neg: string, pos: string) => (this.keys.has(pos) ? 1 : 0) - (this.keys.has(neg) ? 1 : 0);
    const frame: InputFrame = {
      ls: { x: axis("KeyA", "KeyD"), y: axis("KeyS", "KeyW") },
      rs: { x: axis("ArrowLeft", "ArrowRight"), y: axis("ArrowDown", "ArrowUp") },
      buttons: this.edges,
    };
    this.edges = {};
    return frame;
  }
}

/** Scripted input for tests: a queue of frames, idle when exhausted. */
export class GamepadStub implements InputSource {
  private queue: InputFrame[] = [];

  push(...frames: InputFrame[]): void {
    this.queue.push(...frames);
  }

  pushStick(rs: StickDoc, ticks: number): void {
    for (let i = 0; i < ticks; i++) this.push({ ls: { x: 0, y: 0 }, rs, buttons: {} });
  }

  get remaining(): number {
    return this.queue.length;
  }

  poll(): InputFrame {
    return this.queue.shift() ?? IDLE_FRAME;
  }
}
