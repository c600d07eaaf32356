// Browser entry: connect, pump input at the tick rate, render audio and
// the schematic. The server owns all game semantics; this page only
// translates devices to input messages and events to sound/pixels.

import { AudioRenderer, BrowserSpeech } from "./audio.js";
import { GamepadInput, KeyboardInput, type InputSource } from "./input.js";
import { buildPanel } from "./panel.js";
import { SchematicView } from "./schematic.js";
import { ClientSession } from "./session.js";
import { WebSocketTransport } from "./ws.js";

async function start(): Promise<void> {
  const params = new URLSearchParams(location.search);
  const url = params.get("server") ?? "ws://127.0.0.1:8765/session";
  const device = params.get("input") ?? "keyboard";

  const statusEl = document.getElementById("status") as HTMLElement;
  const canvas = document.getElementById("schematic") as HTMLCanvasElement;
  const panelEl = document.getElementById("panel") as HTMLElement;

  const transport = new WebSocketTransport(url);
  await transport.ready;
  const session = new ClientSession(transport);

  const ctx = new AudioContext();
  const renderer = new AudioRenderer(
    {
      createOscillator: () => ctx.createOscillator(),
      createGain: () => ctx.createGain(),
      createStereoPanner: () => ctx.createStereoPanner(),
      destination: ctx.destination,
    },
    new BrowserSpeech()
  );
  const schematic = new SchematicView(canvas);

  session.onSnapshot = (snap) => {
    schematic.setScene(snap);
    statusEl.textContent = `scene: ${(snap.scene as { meta?: { id?: string } }).meta?.id ?? "?"}`;
  };
  session.onAudio = (e) => renderer.render(e);
  session.onDelta = (d) => {
    renderer.setPose(d.pose);
    renderer.updateEntities(d.entities);
    canvas.style.visibility = d.graphics_enabled ? "visible" : "hidden";
    schematic.draw(d, d.graphics_enabled);
  };

  let input: InputSource;
  if (device === "gamepad") {
    input = new GamepadInput();
  } else {
    const kb = new KeyboardInput();
    kb.attach(window as unknown as { addEventListener(type: string, cb: (e: KeyboardEvent) => void): void });
    input = kb;
  }

  await session.hello();
  buildPanel(panelEl, session);

  // live server ticks on wall time; we just stream input at ~60 Hz
  setInterval(() => {
    session.sendInput(input.poll());
  }, 1000 / 60);
}

start().catch((err) => {
  const statusEl = document.getElementById("status");
  if (statusEl) statusEl.textContent = String(err);
});
