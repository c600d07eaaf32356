"""Live session bridge: streams state and audio events to a client,
accepts input samples and facilitator controls.

The protocol is line-delimited structured text in the log dialect, one
message per line/frame, duplex. SessionCore is transport agnostic (the
tests drive it directly); `stdio_session` wraps it for subprocess use
with an explicit `step` control as the clock, and `serve` exposes a
websocket endpoint that ticks on wall time.

Input is sampled-and-held at the tick rate regardless of client send
rate; a message's edges apply at the next tick. The server records the
applied-inputs transcript, so any live session replays headlessly to a
byte-identical event log.

No postponed annotations here: the websocket route's signature must
carry the real WebSocket class for dependency resolution to see it.
"""
import sys
from pathlib import Path
from typing import Optional

from .config import EngineConfig
from .docs import DocumentError, dumps_line, loads
from .events import EventLog, event_doc
from .replay import ControlRecord, TraceRecord, save_trace
from .scene import Scene, gen_aisle, gen_segment, gen_terraformers, gen_trial, load_scene, scene_to_doc
from .sim import GameRuntime, InputSample
from .stick import StickSample, stick_to_bearing

PROTOCOL_VERSION = 1


def resolve_scene_spec(spec: str) -> Scene:
    """File path, or one of aisle / terraformers / segment:N / trial:N."""
    if spec == "aisle":
        return gen_aisle(0)
    if spec == "terraformers":
        return gen_terraformers()
    if spec.startswith("segment:"):
        return gen_segment(int(spec.split(":", 1)[1]))[0]
    if spec.startswith("trial:"):
        return gen_trial(int(spec.split(":", 1)[1]))
    return load_scene(Path(spec).read_text())


class SessionCore:
    """One client's session: playlist, runtime, transcript, sequencing."""

    def __init__(self, scenes: list[Scene], config: Optional[EngineConfig] = None, seed: int = 0):
        if not scenes:
            raise DocumentError("session needs at least one scene")
        self.scenes = scenes
        self.cfg = config or EngineConfig()
        self.seed = seed
        self.index = 0
        self.log = EventLog()
        self._log_cursor = 0
        self.runtime = GameRuntime(scenes[0], self.cfg, seed=seed, log=self.log)
        self.transcript: list[TraceRecord] = []
        self.session_id: Optional[str] = None
        self.established = False
        self.graphics_enabled = True
        self.last_client_seq = 0
        self._out_seq = 0
        self.held_ls = StickSample(0.0, 0.0)
        self.held_rs = StickSample(0.0, 0.0)
        self.queued_buttons: dict[str, str] = {}

    # --- outbound helpers ---------------------------------------------

    def _msg(self, kind: str, body: dict) -> dict:
        self._out_seq += 1
        return {"body": body, "kind": kind, "seq": self._out_seq, "session": self.session_id}

    def _snapshot(self) -> dict:
        rt = self.runtime
        return self._msg(
            "scene_snapshot",
            {
                "config_tool": self.cfg.tool,
                "graphics_enabled": self.graphics_enabled,
                "pose": self._pose_doc(),
                "scene": scene_to_doc(rt.scene),
                "scene_index": self.index,
                "status": rt.objective_status(),
                "tick": rt.tick,
            },
        )

    def _pose_doc(self) -> dict:
        p = self.runtime.pose
        return {"heading": float(p.heading), "x": float(p.position.x), "y": float(p.position.y)}

    def _state_delta(self, game_records: list[dict]) -> dict:
        rt = self.runtime
        entities = []
        for e in rt.scene.entities:
            pos = rt._entity_position(e)
            entities.append(
                {"alive": rt.rt[e.id].alive, "id": e.id, "x": float(pos.x), "y": float(pos.y)}
            )
        bearing = stick_to_bearing(self.held_rs, self.cfg.navstick)
        return self._msg(
            "state_delta",
            {
                "entities": entities,
                "events": game_records,
                "graphics_enabled": self.graphics_enabled,
                "pose": self._pose_doc(),
                "scrub_bearing": bearing,
                "status": rt.objective_status(),
                "tick": rt.tick,
            },
        )

    def _drain_new_records(self) -> tuple[list[dict], list[dict]]:
        audio, game = [], []
        records = self.log.records
        while self._log_cursor < len(records):
            rec = records[self._log_cursor]
            self._log_cursor += 1
            doc = event_doc(rec)
            (audio if doc.get("type") == "audio" else game).append(doc)
        return audio, game

    # --- inbound ---------------------------------------------------------

    def handle_message(self, msg: dict) -> list[dict]:
        try:
            kind = msg.get("kind")
            seq = int(msg.get("seq", 0))
            if kind == "hello":
                body = msg.get("body", {})
                if body.get("protocol") != PROTOCOL_VERSION:
                    return [self._msg("error", {"message": f"unsupported protocol {body.get('protocol')}"})]
                self.session_id = msg.get("session") or "session-1"
                self.established = True
                self.last_client_seq = seq
                hello = self._msg("hello", {"protocol": PROTOCOL_VERSION, "tick_rate": self.cfg.tick_rate})
                return [hello, self._snapshot()]
            if not self.established:
                return [self._msg("error", {"message": "hello required"})]
            if seq <= self.last_client_seq:
                return [self._msg("ack", {"acked": self.last_client_seq, "stale": seq})]
            self.last_client_seq = seq
            if kind == "input":
                return self._handle_input(msg.get("body", {}), seq)
            if kind == "control":
                return self._handle_control(msg.get("body", {}), seq)
            return [self._msg("error", {"message": f"unknown kind '{kind}'"})]
        except (KeyError, TypeError, ValueError, DocumentError) as e:
            return [self._msg("error", {"message": f"malformed message: {e}"})]

    def _handle_input(self, body: dict, seq: int) -> list[dict]:
        ls = body.get("ls", {})
        rs = body.get("rs", {})
        self.held_ls = StickSample(float(ls.get("x", 0.0)), float(ls.get("y", 0.0)))
        self.held_rs = StickSample(float(rs.get("x", 0.0)), float(rs.get("y", 0.0)))
        for name, edge in dict(body.get("buttons", {})).items():
            self.queued_buttons[str(name)] = str(edge)
        return [self._msg("ack", {"acked": seq})]

    def _handle_control(self, body: dict, seq: int) -> list[dict]:
        op = str(body.get("op", ""))
        out = [self._msg("ack", {"acked": seq, "op": op})]
        if op == "step":
            for _ in range(int(body.get("ticks", 1))):
                out.extend(self.tick())
            return out
        if op == "toggle_graphics":
            self.graphics_enabled = not self.graphics_enabled
            t = self.runtime.tick + 1
            self.transcript.append(ControlRecord(t, "toggle_graphics"))
            self.log.game(t, "graphics_toggled", {})
            # the control consumed tick t's transcript slot: replay steps
            # that tick with held sticks and no edges, so do the same
            saved = self.queued_buttons
            self.queued_buttons = {}
            out.extend(self.tick(record=False))
            self.queued_buttons = saved
            return out
        if op in ("advance_segment", "repeat_segment", "set_tool"):
            arg = body.get("arg")
            if op == "advance_segment" and self.index + 1 >= len(self.scenes):
                out.append(self._msg("error", {"message": "no further segment"}))
                return out
            t = self.runtime.tick + 1
            self.runtime.finish()
            if op == "advance_segment":
                self.index += 1
            elif op == "set_tool" and arg:
                from dataclasses import replace

                self.cfg = replace(self.cfg, tool=str(arg))
            self.transcript.append(ControlRecord(t, op, str(arg) if arg else None))
            self.runtime = GameRuntime(self.scenes[self.index], self.cfg, seed=self.seed, log=self.log, start_tick=t)
            self.held_ls = StickSample(0.0, 0.0)
            self.held_rs = StickSample(0.0, 0.0)
            self.queued_buttons = {}
            audio, game = self._drain_new_records()
            out.extend(self._msg("audio_event", a) for a in audio)
            out.append(self._snapshot())
            return out
        out.append(self._msg("error", {"message": f"unknown control '{op}'"}))
        return out

    # --- clock ------------------------------------------------------------

    def tick(self, record: bool = True) -> list[dict]:
        """Advance one tick, applying the held input; returns the
        outbound messages (audio events then one state delta)."""
        t = self.runtime.tick + 1
        sample = InputSample(t, self.held_ls, self.held_rs, dict(self.queued_buttons))
        self.queued_buttons = {}
        if record:
            self.transcript.append(sample)
        self.runtime.step(sample)
        audio, game = self._drain_new_records()
        out = [self._msg("audio_event", a) for a in audio]
        out.append(self._state_delta(game))
        return out

    def reconnect(self, session_id: str) -> list[dict]:
        """Same-token resume: a fresh snapshot, no replayed events."""
        if session_id != self.session_id:
            return [self._msg("error", {"message": "unknown session token"})]
        return [self._msg("hello", {"protocol": PROTOCOL_VERSION, "resumed": True}), self._snapshot()]

    def finish(self) -> None:
        self.runtime.finish()
        self._drain_new_records()

    def transcript_text(self) -> str:
        return save_trace(self.transcript)

    def log_text(self) -> str:
        return self.log.text()


# --- stdio transport --------------------------------------------------


def stdio_session(
    scene_specs: list[str],
    config: Optional[EngineConfig] = None,
    seed: int = 0,
    transcript_out: Optional[str] = None,
    log_out: Optional[str] = None,
    stdin=None,
    stdout=None,
) -> None:
    """Serve one session over stdin/stdout; the client drives the clock
    with `step` controls. EOF ends the session and writes artifacts."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    scenes = [resolve_scene_spec(s) for s in scene_specs]
    core = SessionCore(scenes, config, seed)
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            msg = loads(line)
        except DocumentError as e:
            stdout.write(dumps_line({"body": {"message": str(e)}, "kind": "error", "seq": 0, "session": None}) + "\n")
            stdout.flush()
            continue
        for out in core.handle_message(msg):
            stdout.write(dumps_line(out) + "\n")
        stdout.flush()
    core.finish()
    if transcript_out:
        Path(transcript_out).write_text(core.transcript_text())
    if log_out:
        Path(log_out).write_text(core.log_text())


# --- websocket transport ------------------------------------------------


def build_app(scene_specs: list[str], config: Optional[EngineConfig] = None, seed: int = 0):
    """FastAPI app with a /session websocket; one SessionCore per socket."""
    import asyncio

    from fastapi import FastAPI, WebSocket, WebSocketDisconnect

    app = FastAPI(title="navstick-session")
    scenes = [resolve_scene_spec(s) for s in scene_specs]
    cfg = config or EngineConfig()

    @app.websocket("/session")
    async def session(ws: WebSocket):
        await ws.accept()
        core = SessionCore(scenes, cfg, seed)

        async def send(msgs):
            for m in msgs:
                await ws.send_text(dumps_line(m))

        async def ticker():
            try:
                while True:
                    await asyncio.sleep(1.0 / cfg.tick_rate)
                    if core.established:
                        await send(core.tick())
            except Exception:
                return

        task = asyncio.create_task(ticker())
        try:
            while True:
                text = await ws.receive_text()
                try:
                    msg = loads(text)
                except DocumentError as e:
                    await send([{"body": {"message": str(e)}, "kind": "error", "seq": 0, "session": None}])
                    continue
                await send(core.handle_message(msg))
        except WebSocketDisconnect:
            pass
        finally:
            task.cancel()
            core.finish()

    return app


def serve(scene_specs: list[str], config: Optional[EngineConfig] = None, seed: int = 0,
          host: str = "127.0.0.1", port: int = 8765) -> None:
    import uvicorn

    uvicorn.run(build_app(scene_specs, config, seed), host=host, port=port, log_level="warning")
