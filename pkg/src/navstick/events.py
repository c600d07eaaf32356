"""Audio/game event model and the append-only line-delimited log format.

One canonical line per event. Audio start/stop records are the engine's
sole observable audio output; game records carry objective progress and
the bookkeeping the metrics module re-derives reports from. Logs begin
with a schema version header line.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .docs import DocumentError, dumps_line, loads
from .geometry import Vec2

CHANNELS = ("speech", "nav_tone", "quest", "ambient", "footstep", "fx")
NAV_TONE_FREQS = (440.0, 1320.0)

LOG_FORMAT = "navstick-events"
LOG_VERSION = 1


@dataclass(frozen=True)
class AudioEvent:
    tick: int
    channel: str
    action: str  # "start" | "stop"
    payload: Union[str, float]  # text, or frequency in Hz for tones
    position: Vec2
    source_entity: Optional[str]
    event_id: int
    ref: Optional[int] = None  # stop events reference their start


@dataclass(frozen=True)
class GameEvent:
    tick: int
    kind: str
    data: dict
    event_id: int


def header_line() -> str:
    return dumps_line({"format": LOG_FORMAT, "version": LOG_VERSION})


def event_doc(e: Union[AudioEvent, GameEvent]) -> dict:
    """Canonical record form; shared by the log format and the session
    protocol so clients see exactly the logged fields."""
    if isinstance(e, GameEvent):
        return {"data": e.data, "event_id": e.event_id, "kind": e.kind, "tick": e.tick, "type": "game"}
    if e.channel not in CHANNELS:
        raise DocumentError(f"unknown channel '{e.channel}'")
    if e.action not in ("start", "stop"):
        raise DocumentError(f"unknown action '{e.action}'")
    if e.action == "stop" and e.ref is None:
        raise DocumentError("stop event without a start reference")
    if e.channel == "nav_tone" and float(e.payload) not in NAV_TONE_FREQS:
        raise DocumentError(f"nav_tone frequency {e.payload} outside configured set")
    return {
        "action": e.action,
        "channel": e.channel,
        "event_id": e.event_id,
        "payload": e.payload if isinstance(e.payload, str) else float(e.payload),
        "position": {"x": float(e.position.x), "y": float(e.position.y)},
        "ref": e.ref,
        "source": e.source_entity,
        "tick": e.tick,
        "type": "audio",
    }


def encode_event(e: Union[AudioEvent, GameEvent]) -> str:
    """One canonical log line; refuses structurally invalid events."""
    return dumps_line(event_doc(e))


def decode_line(line: str) -> Union[AudioEvent, GameEvent, dict]:
    obj = loads(line)
    if not isinstance(obj, dict):
        raise DocumentError("log line is not an object")
    if "format" in obj:
        return obj  # header
    if obj.get("type") == "game":
        return GameEvent(int(obj["tick"]), str(obj["kind"]), dict(obj["data"]), int(obj["event_id"]))
    pos = obj["position"]
    return AudioEvent(
        tick=int(obj["tick"]),
        channel=str(obj["channel"]),
        action=str(obj["action"]),
        payload=obj["payload"],
        position=Vec2(float(pos["x"]), float(pos["y"])),
        source_entity=obj.get("source"),
        event_id=int(obj["event_id"]),
        ref=obj.get("ref"),
    )


class EventLog:
    """Per-session append-only sink with a monotone event id sequence."""

    def __init__(self) -> None:
        self.records: list[Union[AudioEvent, GameEvent]] = []
        self._next_id = 1

    def audio(
        self,
        tick: int,
        channel: str,
        action: str,
        payload: Union[str, float],
        position: Vec2,
        source: Optional[str] = None,
        ref: Optional[int] = None,
    ) -> AudioEvent:
        e = AudioEvent(tick, channel, action, payload, position, source, self._next_id, ref)
        encode_event(e)  # validate before committing
        self._next_id += 1
        self.records.append(e)
        return e

    def game(self, tick: int, kind: str, data: Optional[dict] = None) -> GameEvent:
        e = GameEvent(tick, kind, dict(data or {}), self._next_id)
        self._next_id += 1
        self.records.append(e)
        return e

    @property
    def audio_events(self) -> list[AudioEvent]:
        return [r for r in self.records if isinstance(r, AudioEvent)]

    @property
    def game_events(self) -> list[GameEvent]:
        return [r for r in self.records if isinstance(r, GameEvent)]

    def lines(self) -> list[str]:
        return [header_line()] + [encode_event(r) for r in self.records]

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines())


def parse_log(text: str) -> list[Union[AudioEvent, GameEvent]]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        rec = decode_line(line)
        if isinstance(rec, dict):
            if rec.get("format") != LOG_FORMAT:
                raise DocumentError(f"unexpected log format {rec.get('format')!r}")
            continue
        out.append(rec)
    return out


def validate_log(lines: Iterable[str]) -> list[str]:
    """Check pairing, id monotonicity, and speech exclusivity.

    Returns a list of violation descriptions; empty means the log is
    well-formed. Unterminated starts at end-of-log are violations too
    (the engine closes every channel when a session ends).
    """
    violations: list[str] = []
    open_starts: dict[int, AudioEvent] = {}
    active_speech = 0
    last_id = 0
    last_tick = -1
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            rec = decode_line(line)
        except DocumentError as e:
            violations.append(f"line {i}: {e}")
            continue
        if isinstance(rec, dict):
            continue
        if rec.event_id <= last_id:
            violations.append(f"event {rec.event_id}: id not monotone (after {last_id})")
        last_id = rec.event_id
        if rec.tick < last_tick:
            violations.append(f"event {rec.event_id}: tick regression {rec.tick} < {last_tick}")
        last_tick = rec.tick
        if isinstance(rec, GameEvent):
            continue
        if rec.channel == "nav_tone" and float(rec.payload) not in NAV_TONE_FREQS:
            violations.append(f"event {rec.event_id}: nav_tone frequency {rec.payload}")
        if rec.action == "start":
            if rec.channel == "speech":
                if active_speech >= 1:
                    violations.append(f"event {rec.event_id}: overlapping speech start")
                active_speech += 1
            open_starts[rec.event_id] = rec
        else:
            if rec.ref not in open_starts:
                violations.append(f"event {rec.event_id}: stop without open start (ref={rec.ref})")
                continue
            start = open_starts.pop(rec.ref)
            if start.channel != rec.channel:
                violations.append(f"event {rec.event_id}: stop channel {rec.channel} != start {start.channel}")
            if start.channel == "speech":
                active_speech -= 1
    for eid in sorted(open_starts):
        violations.append(f"event {eid}: start never stopped")
    return violations
