"""Quality-of-life aids: quest display, auto-turn, proximity notifier,
footstep feedback, collider scaling, automatic vertical aim.

These supplement the scrub tool rather than replace it; all are toggled
through EnhanceConfig and default on for the adventure-game setup.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .config import EnhanceConfig
from .events import EventLog
from .geometry import Vec2, heading_vec, shape_center, shape_scaled, world_angle
from .scene import Entity, PlayerPose, Scene
from .stick import ScrubState


class EnhanceError(ValueError):
    pass


@dataclass
class QuestState:
    target: Optional[str] = None
    accumulated_turn: float = 0.0  # degrees since the last tick-tone, in [0, quantum)


def _angle_delta(old: float, new: float) -> float:
    d = abs(new - old) % 360.0
    return min(d, 360.0 - d)


def _one_shot(sink: EventLog, tick: int, channel: str, payload, position: Vec2, source=None) -> None:
    start = sink.audio(tick, channel, "start", payload, position, source)
    sink.audio(tick, channel, "stop", payload, position, source, ref=start.event_id)


def quest_tick(
    q: QuestState,
    old_heading: float,
    new_heading: float,
    pose: PlayerPose,
    scene: Scene,
    *,
    tick: int,
    sink: EventLog,
    cfg: EnhanceConfig,
) -> QuestState:
    """Accumulate |heading change|; each crossing of the turn quantum
    fires one short tone 2 m from the player toward the current target."""
    if q.target is None:
        raise EnhanceError("quest target missing")
    entity = scene.entity(q.target)
    q.accumulated_turn += _angle_delta(old_heading, new_heading)
    tones = int(q.accumulated_turn // cfg.quest_turn_deg)
    if tones:
        q.accumulated_turn -= tones * cfg.quest_turn_deg
        position = _quest_tone_position(pose, entity, cfg)
        for _ in range(tones):
            _one_shot(sink, tick, "quest", "quest_tone", position, entity.id)
    return q


def _quest_tone_position(pose: PlayerPose, target: Entity, cfg: EnhanceConfig) -> Vec2:
    toward = world_angle(shape_center(target.shape) - pose.position)
    return pose.position + heading_vec(toward).scaled(cfg.quest_tone_distance_m)


def quest_target_acquired(
    q: QuestState, pose: PlayerPose, scene: Scene, *, tick: int, sink: EventLog, cfg: EnhanceConfig
) -> None:
    """One orientation tone when the quest target is set or changes."""
    entity = scene.entity(q.target)
    _one_shot(sink, tick, "quest", "quest_tone", _quest_tone_position(pose, entity, cfg), entity.id)


def auto_turn(pose: PlayerPose, scrub: ScrubState, scene: Scene) -> PlayerPose:
    """Snap heading so the scrubbed target sits at 12 o'clock."""
    key = scrub.slice_key
    if key is None or key[0] != "poi":
        raise EnhanceError("not scrubbing a POI")
    center = shape_center(scene.entity(key[1]).shape)
    offset = center - pose.position
    if offset.norm() < 1e-9:
        return pose
    return PlayerPose(pose.position, world_angle(offset))


class ProximityNotifier:
    """Ambient sounds while physically near each kind of POI, with
    hysteresis so boundary jitter cannot flap start/stop pairs.

    Distance is measured player-to-shape-center; per-kind radii come
    from config (kinds without a radius never notify)."""

    def __init__(self) -> None:
        self._inside: dict[str, int] = {}  # entity id -> start event id

    def update(self, pose: PlayerPose, scene: Scene, *, tick: int, sink: EventLog, cfg: EnhanceConfig) -> None:
        for e in scene.entities:
            radius = cfg.proximity_radii.get(e.kind, 0.0)
            if radius <= 0.0:
                continue
            inside = e.id in self._inside
            if not e.alive:
                if inside:
                    self._stop(e, tick, sink)
                continue
            d = pose.position.dist(shape_center(e.shape))
            if not inside and d <= radius:
                start = sink.audio(tick, "ambient", "start", f"ambient:{e.kind}", shape_center(e.shape), e.id)
                self._inside[e.id] = start.event_id
            elif inside and d > radius + cfg.proximity_hysteresis_m:
                self._stop(e, tick, sink)

    def _stop(self, e: Entity, tick: int, sink: EventLog) -> None:
        ref = self._inside.pop(e.id)
        sink.audio(tick, "ambient", "stop", f"ambient:{e.kind}", shape_center(e.shape), e.id, ref=ref)

    def close(self, tick: int, scene: Scene, sink: EventLog) -> None:
        for eid in list(self._inside):
            self._stop(scene.entity(eid), tick, sink)


class FootstepTracker:
    """Velocity-dependent footsteps: one per stride length traveled."""

    def __init__(self, stride_m: float):
        self.stride_m = stride_m
        self.traveled = 0.0

    def update(
        self,
        distance: float,
        position: Vec2,
        *,
        tick: int,
        sink: EventLog,
        source: Optional[str] = None,
        audible: bool = True,
    ) -> int:
        """Accumulate distance walked this tick; emit footstep one-shots
        on stride crossings. Returns the number emitted."""
        if distance <= 0.0:
            return 0
        self.traveled += distance
        steps = 0
        # 1e-9 m slack so per-tick float error cannot push an exact
        # stride crossing just under the boundary
        while self.traveled >= self.stride_m - 1e-9:
            self.traveled -= self.stride_m
            steps += 1
        if audible:
            for _ in range(steps):
                _one_shot(sink, tick, "footstep", "footstep", position, source)
        return steps


def footstep_update(
    velocity: float, dt_s: float, tracker: FootstepTracker, position: Vec2, *, tick: int, sink: EventLog
) -> int:
    """Cadence is speed/stride: zero at rest, doubling with speed."""
    return tracker.update(velocity * dt_s, position, tick=tick, sink=sink)


def scale_colliders(scene: Scene, factor: float) -> Scene:
    """Derived scene with every POI's targeting shape scaled about its
    center. Used by visibility only; movement collision is unchanged."""
    if factor < 1.0:
        raise EnhanceError("scale factor must be >= 1")
    if factor == 1.0:
        return scene
    entities = tuple(
        replace(e, shape=shape_scaled(e.shape, factor)) if e.is_poi else e for e in scene.entities
    )
    return replace(scene, entities=entities)


def vertical_aim(shooter_pose: PlayerPose, target: str, scene: Scene) -> float:
    """Pitch correction for the shot. The world is planar, so this is
    always 0; it exists as the integration point the aim path calls."""
    entity = scene.entity(target)
    if not entity.alive:
        raise EnhanceError(f"target '{target}' is not alive")
    return 0.0
