// Facilitator panel: buttons emit the corresponding control messages.

import type { ClientSession } from "./session.js";

export function buildPanel(root: HTMLElement, session: ClientSession): void {
  const button = (label: string, onClick: () => void) => {
    const el = document.createElement("button");
    el.textContent = label;
    el.addEventListener("click", onClick);
    root.appendChild(el);
    return el;
  };
  button("Advance segment", () => session.control("advance_segment"));
  button("Repeat segment", () => session.control("repeat_segment"));
  button("Tool: stick", () => session.control("set_tool", { arg: "navstick" }));
  button("Tool: menu", () => session.control("set_tool", { arg: "navmenu" }));
  button("Tool: both", () => session.control("set_tool", { arg: "both" }));
  button("Toggle graphics", () => session.control("toggle_graphics"));
}
