"""The scrub state machine: stick samples to bearings, slice selection,
announcement/tone emission with earPod-style truncation.

Truncation contract: leaving a slice stops its audio, but a speech stop
is never emitted before the minimum quantum elapses — the stop (and any
next slice's entry audio) is deferred until the quantum completes, so
even a fast scrub leaves the first syllable audible. Tones stop
immediately. Re-entering a slice whose speech is still draining resumes
it; re-entering after the stop restarts from the beginning.

The slice under the stick is re-resolved every tick from the current
pie, so a moving enemy can enter or leave the pointed bearing without
any stick motion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Protocol

from .config import NavStickConfig
from .events import EventLog
from .geometry import Vec2, heading_vec, norm_deg, shape_center
from .scene import PlayerPose, Scene
from .visibility import RayHit, cast_ray

_EPS_MS = 1e-6

NAVSTICK = "navstick"
MENU = "menu"


@dataclass(frozen=True)
class StickSample:
    x: float  # right-positive
    y: float  # forward-positive

    def magnitude(self) -> float:
        return math.hypot(self.x, self.y)


ZERO_STICK = StickSample(0.0, 0.0)


def stick_to_bearing(s: StickSample, cfg: NavStickConfig) -> Optional[float]:
    """Bearing under the stick, or None below the deadzone.

    (0,1) maps to 0° (12 o'clock), (1,0) to 90°. Output is quantized to
    1e-9° so the twelve clock unit vectors map to exact multiples of 30.
    """
    if s.magnitude() < cfg.deadzone:
        return None
    b = round(norm_deg(math.degrees(math.atan2(s.x, s.y))), 9)
    return 0.0 if b >= 360.0 else b


def announcement_duration_ms(name: str, cfg: NavStickConfig) -> float:
    """Synthetic speech length: ceil(len/rate) in ms. Deterministic
    stand-in for real TTS playback; the UI truncates its synthesis to
    the engine's stop events."""
    if not name:
        raise ValueError("empty announcement")
    return float(math.ceil(len(name) * 1000.0 / cfg.announce_rate_cps))


@dataclass
class SpeechPlayback:
    owner: str
    key: tuple
    text: str
    position: Vec2
    source: Optional[str]
    duration_ms: float
    event_id: int
    elapsed_ms: float = 0.0
    leaving: bool = False


@dataclass
class PendingSpeech:
    owner: str
    key: tuple
    text: str
    position: Vec2
    source: Optional[str]
    duration_ms: float


class SpeechChannel:
    """Single shared speech line for NavStick and the menu.

    At most one active speech exists; a replacement request cuts the
    current playback under the quantum rule and queues (latest wins)
    until the line is free.
    """

    def __init__(self, cfg: NavStickConfig) -> None:
        self.quantum_ms = cfg.min_quantum_ms
        self.active: Optional[SpeechPlayback] = None
        self.pending: Optional[PendingSpeech] = None
        # resolves a source entity to its center at emission time, so a
        # queued announcement of a moving enemy starts at its current spot
        self.position_resolver = None

    @property
    def draining(self) -> bool:
        return self.active is not None and self.active.leaving

    def _stop_bound(self, a: SpeechPlayback) -> float:
        full = a.duration_ms
        return min(self.quantum_ms, full) if a.leaving else full

    def tick(self, tick: int, dt_ms: float, sink: EventLog) -> None:
        a = self.active
        if a is not None:
            a.elapsed_ms += dt_ms
            if a.elapsed_ms >= self._stop_bound(a) - _EPS_MS:
                sink.audio(tick, "speech", "stop", a.text, a.position, a.source, ref=a.event_id)
                self.active = None
        if self.active is None and self.pending is not None:
            p, self.pending = self.pending, None
            self._start(tick, p, sink)

    def _start(self, tick: int, p: PendingSpeech, sink: EventLog) -> None:
        position = p.position
        if p.source is not None and self.position_resolver is not None:
            resolved = self.position_resolver(p.source)
            if resolved is not None:
                position = resolved
        e = sink.audio(tick, "speech", "start", p.text, position, p.source)
        self.active = SpeechPlayback(p.owner, p.key, p.text, position, p.source, p.duration_ms, e.event_id)

    def _cut(self, tick: int, sink: EventLog) -> None:
        a = self.active
        assert a is not None
        if a.elapsed_ms >= min(self.quantum_ms, a.duration_ms) - _EPS_MS:
            sink.audio(tick, "speech", "stop", a.text, a.position, a.source, ref=a.event_id)
            self.active = None
        else:
            a.leaving = True

    def request(
        self,
        tick: int,
        owner: str,
        key: tuple,
        text: str,
        position: Vec2,
        source: Optional[str],
        duration_ms: float,
        sink: EventLog,
    ) -> None:
        a = self.active
        if a is not None and a.owner == owner and a.key == key:
            a.leaving = False  # reclaim a draining playback
            return
        if a is not None and not a.leaving:
            self._cut(tick, sink)
        self.pending = PendingSpeech(owner, key, text, position, source, duration_ms)
        if self.active is None:
            p, self.pending = self.pending, None
            self._start(tick, p, sink)

    def release(self, tick: int, owner: str, sink: EventLog) -> None:
        if self.pending is not None and self.pending.owner == owner:
            self.pending = None
        a = self.active
        if a is not None and a.owner == owner and not a.leaving:
            self._cut(tick, sink)

    def is_active(self, owner: str, key: tuple) -> bool:
        a = self.active
        return a is not None and a.owner == owner and a.key == key

    def has_pending(self, owner: str, key: tuple) -> bool:
        p = self.pending
        return p is not None and p.owner == owner and p.key == key

    def close(self, tick: int, sink: EventLog) -> None:
        """End-of-session: stop whatever is playing regardless of quantum."""
        self.pending = None
        a = self.active
        if a is not None:
            sink.audio(tick, "speech", "stop", a.text, a.position, a.source, ref=a.event_id)
            self.active = None


@dataclass
class TonePlayback:
    key: tuple
    freq: float
    event_id: int
    position: Vec2


class PieView(Protocol):
    def label_at(self, bearing: float) -> tuple: ...


class LazyPie:
    """Single-ray view over the current scene; the simulator's per-tick
    pie (only the label under the stick is ever needed)."""

    def __init__(self, scene: Scene, pose: PlayerPose) -> None:
        self.scene = scene
        self.pose = pose

    def label_at(self, bearing: float) -> tuple:
        return cast_ray(self.scene, self.pose, bearing).label

    def hit_at(self, bearing: float) -> RayHit:
        return cast_ray(self.scene, self.pose, bearing)


class PieAdapter:
    """Adapts a precomputed NavPie to the view protocol."""

    def __init__(self, pie) -> None:
        self.pie = pie

    def label_at(self, bearing: float) -> tuple:
        return self.pie.slice_at(bearing).label


@dataclass
class ScrubState:
    slice_key: Optional[tuple] = None  # slice currently under the stick
    entered_key: Optional[tuple] = None  # slice whose entry audio has run
    tone: Optional[TonePlayback] = None
    last_bearing: Optional[float] = None

    def phase(self, channel: SpeechChannel, cfg: NavStickConfig) -> str:
        a = channel.active
        if a is not None and a.owner == NAVSTICK and not a.leaving:
            return "announcing"
        if self.tone is not None and self.tone.freq == cfg.poi_hold_tone_hz:
            return "holding_poi_tone"
        if self.slice_key is not None and self.slice_key[0] == "nothing":
            return "empty"
        if self.tone is not None:
            return "non_poi_tone"
        return "idle"


def _stop_tone(state: ScrubState, tick: int, sink: EventLog) -> None:
    t = state.tone
    if t is not None:
        sink.audio(tick, "nav_tone", "stop", t.freq, t.position, None, ref=t.event_id)
        state.tone = None


def _start_tone(state: ScrubState, tick: int, key: tuple, freq: float, position: Vec2, source, sink: EventLog) -> None:
    e = sink.audio(tick, "nav_tone", "start", freq, position, source)
    state.tone = TonePlayback(key, freq, e.event_id, position)


def scrub_tick(
    state: ScrubState,
    pie,
    sample: StickSample,
    dt_ms: float,
    cfg: NavStickConfig,
    *,
    scene: Scene,
    pose: PlayerPose,
    tick: int,
    channel: SpeechChannel,
    sink: EventLog,
    advance_channel: bool = True,
) -> ScrubState:
    """Advance the scrub machine one tick. Events go to `sink`.

    `pie` is anything with label_at(bearing); pass a NavPie via
    PieAdapter or let the simulator use a LazyPie. The shared speech
    channel is advanced here unless the caller already did.
    """
    if advance_channel:
        channel.tick(tick, dt_ms, sink)

    bearing = stick_to_bearing(sample, cfg)
    key: Optional[tuple] = None
    if bearing is not None:
        label = pie.label_at(bearing)
        key = tuple(label)

    if key != state.slice_key:
        if state.tone is not None and state.tone.key != key:
            _stop_tone(state, tick, sink)
        p = channel.pending
        if p is not None and p.owner == NAVSTICK and (key is None or p.key != key):
            channel.pending = None  # queued entry for a slice we just left
        a = channel.active
        if a is not None and a.owner == NAVSTICK:
            if key is not None and a.key == key:
                a.leaving = False  # back onto the draining slice: resume
                state.entered_key = key
            else:
                channel.release(tick, NAVSTICK, sink)
        state.slice_key = key
        if state.entered_key != key:
            state.entered_key = None

    if key is None:
        channel.release(tick, NAVSTICK, sink)
        _stop_tone(state, tick, sink)
        state.entered_key = None
        state.last_bearing = None
        return state

    if state.entered_key != key:
        if key[0] == "poi":
            entity = scene.entity(key[1])
            name = entity.name
            channel.request(
                tick,
                NAVSTICK,
                key,
                name,
                shape_center(entity.shape),
                entity.id,
                announcement_duration_ms(name, cfg),
                sink,
            )
            state.entered_key = key
        elif not channel.draining:
            # tone entries wait for a draining announcement to finish
            if key[0] == "obstruction":
                hit = cast_ray(scene, pose, bearing)
                point = hit.point if hit.point is not None else pose.position
                _start_tone(state, tick, key, cfg.non_poi_tone_hz, point, key[1], sink)
            elif cfg.empty_dir_audio == "default_tone":
                point = pose.position + heading_vec(pose.heading + bearing).scaled(cfg.empty_tone_distance_m)
                _start_tone(state, tick, key, cfg.non_poi_tone_hz, point, None, sink)
            state.entered_key = key
    elif (
        key[0] == "poi"
        and state.tone is None
        and not channel.is_active(NAVSTICK, key)
        and not channel.has_pending(NAVSTICK, key)
        and not channel.draining
    ):
        # announcement finished while still pointing: sustained hold tone
        entity = scene.entity(key[1])
        _start_tone(state, tick, key, cfg.poi_hold_tone_hz, shape_center(entity.shape), entity.id, sink)

    state.last_bearing = bearing
    return state


def force_release(state: ScrubState, tick: int, channel: SpeechChannel, sink: EventLog) -> None:
    """Silence NavStick (menu opened / tool switched); speech drains
    under the quantum rule, tones stop immediately."""
    channel.release(tick, NAVSTICK, sink)
    _stop_tone(state, tick, sink)
    state.slice_key = None
    state.entered_key = None
    state.last_bearing = None
