// Top-down schematic view for sighted facilitators and debugging:
// world shapes, the player, and the scrub bearing ray. This is the
// "graphics" a facilitator can disable; gameplay never depends on it.

import type { SceneSnapshotBody, StateDeltaBody } from "./protocol.js";

interface ShapeDoc {
  kind: string;
  center?: { x: number; y: number };
  radius?: number;
  min?: { x: number; y: number };
  max?: { x: number; y: number };
  a?: { x: number; y: number };
  b?: { x: number; y: number };
}

export class SchematicView {
  private scale = 14; // px per meter
  private scene: SceneSnapshotBody | null = null;

  constructor(private readonly canvas: HTMLCanvasElement) {}

  setScene(snapshot: SceneSnapshotBody): void {
    this.scene = snapshot;
  }

  private toPx(x: number, y: number): [number, number] {
    // world y grows north; canvas y grows down
    return [this.canvas.width / 2 + x * this.scale, this.canvas.height / 2 - y * this.scale];
  }

  draw(delta: StateDeltaBody | null, visible: boolean): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    if (!visible || !this.scene || !delta) return;
    const sceneDoc = this.scene.scene as { entities?: unknown[]; occluders?: unknown[] };
    ctx.strokeStyle = "#666";
    for (const occ of (sceneDoc.occluders ?? []) as { shape: ShapeDoc }[]) {
      this.drawShape(ctx, occ.shape, "#888", false);
    }
    const alive = new Map(delta.entities.map((e) => [e.id, e]));
    for (const ent of (sceneDoc.entities ?? []) as { id: string; shape: ShapeDoc; is_poi: boolean }[]) {
      const state = alive.get(ent.id);
      if (!state || !state.alive) continue;
      const shape = { ...ent.shape };
      if (shape.kind === "circle" && shape.center) shape.center = { x: state.x, y: state.y };
      this.drawShape(ctx, shape, ent.is_poi ? "#2a7" : "#a52", true);
    }
    // player and the scrub ray (the "green line")
    const [px, py] = this.toPx(delta.pose.x, delta.pose.y);
    ctx.fillStyle = "#06c";
    ctx.beginPath();
    ctx.arc(px, py, 5, 0, Math.PI * 2);
    ctx.fill();
    const headingRad = (delta.pose.heading * Math.PI) / 180;
    ctx.strokeStyle = "#06c";
    ctx.beginPath();
    ctx.moveTo(px, py);
    ctx.lineTo(px + 12 * Math.sin(headingRad), py - 12 * Math.cos(headingRad));
    ctx.stroke();
    if (delta.scrub_bearing !== null) {
      const ray = ((delta.pose.heading + delta.scrub_bearing) * Math.PI) / 180;
      ctx.strokeStyle = "#0c3";
      ctx.beginPath();
      ctx.moveTo(px, py);
      ctx.lineTo(px + 400 * Math.sin(ray), py - 400 * Math.cos(ray));
      ctx.stroke();
    }
  }

  private drawShape(ctx: CanvasRenderingContext2D, s: ShapeDoc, color: string, fill: boolean): void {
    ctx.strokeStyle = color;
    ctx.fillStyle = color + "44";
    if (s.kind === "circle" && s.center && s.radius !== undefined) {
      const [cx, cy] = this.toPx(s.center.x, s.center.y);
      ctx.beginPath();
      ctx.arc(cx, cy, s.radius * this.scale, 0, Math.PI * 2);
      if (fill) ctx.fill();
      ctx.stroke();
    } else if (s.kind === "rect" && s.min && s.max) {
      const [x0, y0] = this.toPx(s.min.x, s.max.y);
      const [x1, y1] = this.toPx(s.max.x, s.min.y);
      if (fill) ctx.fillRect(x0, y0, x1 - x0, y1 - y0);
      ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);
    } else if (s.kind === "segment" && s.a && s.b) {
      const [ax, ay] = this.toPx(s.a.x, s.a.y);
      const [bx, by] = this.toPx(s.b.x, s.b.y);
      ctx.beginPath();
      ctx.moveTo(ax, ay);
      ctx.lineTo(bx, by);
      ctx.stroke();
    }
  }
}
