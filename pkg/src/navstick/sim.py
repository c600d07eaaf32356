"""Deterministic fixed-tick world: movement, patrols, combat, objectives,
timers, attempts, and the per-tick wiring of survey tools and enhancements.

Everything advances at 60 ticks per second in a frozen order, so identical
(scene, seed, input trace) triples produce byte-identical event logs. One
GameRuntime instance owns one session's world.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .config import EngineConfig
from .enhance import (
    EnhanceError,
    FootstepTracker,
    ProximityNotifier,
    QuestState,
    auto_turn,
    quest_target_acquired,
    quest_tick,
    scale_colliders,
    vertical_aim,
)
from .events import EventLog
from .geometry import Circle, Vec2, contains, heading_vec, shape_center
from .menu import (
    MenuState,
    SelectionError,
    TeleportError,
    menu_close,
    menu_open,
    menu_step,
    query_price,
    selected_entity_id,
    teleport,
)
from .scene import GATE_BLOCKER_SUFFIX, Entity, Patrol, PlayerPose, Scene
from .stick import (
    LazyPie,
    ScrubState,
    SpeechChannel,
    StickSample,
    force_release,
    scrub_tick,
    stick_to_bearing,
)
from .visibility import cast_ray

BUTTONS = ("LB", "RB", "LT", "RT", "LShoulder", "DPadUp", "DPadDown")
TIME_MILESTONES = (30, 15, 10, 5)  # seconds-remaining voice announcements


@dataclass(frozen=True)
class InputSample:
    tick: int
    left_stick: StickSample = StickSample(0.0, 0.0)
    right_stick: StickSample = StickSample(0.0, 0.0)
    buttons: dict = field(default_factory=dict)  # name -> "down" | "up"


def _clamp_stick(s: StickSample) -> StickSample:
    # quantize to the trace dialect's 6-decimal precision so live input,
    # in-memory traces, and file-replayed traces drive identical worlds
    return StickSample(
        round(max(-1.0, min(1.0, s.x)), 6),
        round(max(-1.0, min(1.0, s.y)), 6),
    )


@dataclass
class _EntityRt:
    alive: bool
    patrol_ticks: int = 0
    leg: int = 0
    footsteps: Optional[FootstepTracker] = None


class GameRuntime:
    """One session's world, survey tools, and event log."""

    def __init__(
        self,
        scene: Scene,
        config: Optional[EngineConfig] = None,
        seed: int = 0,
        log: Optional[EventLog] = None,
        start_tick: int = 0,
    ):
        self.scene = scene
        self.cfg = config or EngineConfig()
        self.rng_seed = seed
        self.log = log if log is not None else EventLog()
        self.tick = start_tick
        self._begin_attempt(attempt=1, first=True)

    # --- attempt lifecycle ------------------------------------------------

    def _begin_attempt(self, attempt: int, first: bool = False) -> None:
        cfg = self.cfg
        self.pose = self.scene.spawn
        self.rt: dict[str, _EntityRt] = {}
        for e in self.scene.entities:
            rt = _EntityRt(alive=e.alive)
            if e.patrol is not None:
                rt.footsteps = FootstepTracker(cfg.enhance.stride_m)
            self.rt[e.id] = rt
        self.inactive_occluders: set[str] = set()
        self.attempt = attempt
        self.segment_start_tick = self.tick
        self.defeated = 0
        self.revealed = False
        self.pad_pressed = False
        self.gate_open = False
        self.gate_opens_at: Optional[int] = None
        self.visit_index = 0
        self.aiming = False
        self.completed = False
        self.exhausted = False
        self.held: set[str] = set()
        self.left_stick = StickSample(0.0, 0.0)
        self.right_stick = StickSample(0.0, 0.0)
        self.scrub = ScrubState()
        self.menu = MenuState()
        self.channel = SpeechChannel(cfg.navstick)
        self.proximity = ProximityNotifier()
        self.player_footsteps = FootstepTracker(cfg.enhance.stride_m)
        self.quest = QuestState()
        self._announced_milestones: set[int] = set()
        self._last_whole_second: Optional[int] = None
        spec = self.scene.segment
        self.time_limit = spec.time_limit if spec else None
        self.max_attempts = spec.max_attempts if spec else 1
        self.log.game(self.tick, "segment_started", {"scene": self.scene.id, "attempt": attempt, "seed": self.rng_seed})
        if self._quest_enabled():
            target = self._quest_target()
            if target is not None:
                self.quest.target = target
                quest_target_acquired(
                    self.quest, self.pose, self.scene, tick=self.tick, sink=self.log, cfg=self.cfg.enhance
                )

    # --- derived views ----------------------------------------------------

    def _entity_position(self, e: Entity) -> Vec2:
        rt = self.rt[e.id]
        if e.patrol is not None:
            pos, _ = _patrol_pos_leg(e.patrol, rt.patrol_ticks, self.cfg.dt_s)
            return pos
        return shape_center(e.shape)

    def effective_scene(self) -> Scene:
        """Scene as it stands this tick: runtime aliveness, roamer
        positions, gate blockers removed once open."""
        ents = []
        for e in self.scene.entities:
            rt = self.rt[e.id]
            if e.patrol is not None:
                pos, _ = _patrol_pos_leg(e.patrol, rt.patrol_ticks, self.cfg.dt_s)
                ents.append(replace(e, alive=rt.alive, shape=Circle(pos, e.shape.radius)))
            elif e.alive != rt.alive:
                ents.append(replace(e, alive=rt.alive))
            else:
                ents.append(e)
        occ = tuple(o for o in self.scene.occluders if o.id not in self.inactive_occluders)
        return replace(self.scene, entities=tuple(ents), occluders=occ)

    def targeting_scene(self, effective: Optional[Scene] = None) -> Scene:
        """Visibility view: POI colliders scaled when the enhancement is on."""
        eff = effective if effective is not None else self.effective_scene()
        factor = self.cfg.enhance.collider_scale if self.cfg.enhance.enabled else 1.0
        return scale_colliders(eff, factor)

    def _movement_blockers(self):
        return [
            o for o in self.scene.occluders if o.blocks_movement and o.id not in self.inactive_occluders
        ]

    def _quest_enabled(self) -> bool:
        return self.cfg.enhance.enabled and self.cfg.enhance.quest_display

    def _quest_target(self) -> Optional[str]:
        spec = self.scene.segment
        if spec is not None:
            if spec.objective.kind == "pressure_pad_gate" and not self.gate_open:
                pads = [e.id for e in self.scene.entities if e.kind == "pressure_pad"]
                if pads:
                    return pads[0]
            cps = [e.id for e in self.scene.entities if e.kind == "checkpoint"]
            return cps[0] if cps else None
        if self.scene.visit_order and self.visit_index < len(self.scene.visit_order):
            return self.scene.visit_order[self.visit_index]
        return None

    @property
    def time_remaining(self) -> Optional[float]:
        if self.time_limit is None:
            return None
        return self.time_limit - (self.tick - self.segment_start_tick) * self.cfg.dt_s

    @property
    def terminal(self) -> bool:
        return self.completed or self.exhausted

    # --- the tick ---------------------------------------------------------

    def step(self, sample: InputSample) -> None:
        """Advance exactly one tick. Events land in self.log."""
        if sample.tick != self.tick + 1:
            raise ValueError(f"tick {sample.tick} does not follow {self.tick}")
        self.tick = sample.tick
        if self.terminal:
            return
        t = self.tick
        cfg = self.cfg
        heading_at_start = self.pose.heading

        # held state and edges
        edges_down = {b for b, v in sample.buttons.items() if v == "down" and b not in self.held}
        for b, v in sample.buttons.items():
            if b not in BUTTONS:
                continue
            if v == "down":
                self.held.add(b)
            else:
                self.held.discard(b)
        self.left_stick = _clamp_stick(sample.left_stick)
        self.right_stick = _clamp_stick(sample.right_stick)
        self.aiming = "LT" in self.held

        # movement (or aim steering): rotate, then translate
        ls = self.left_stick
        new_heading = self.pose.heading + ls.x * cfg.turn_rate_dps * cfg.dt_s
        moved = 0.0
        if self.aiming:
            self.pose = PlayerPose(self.pose.position, new_heading)
        else:
            step_len = ls.y * cfg.walk_speed_mps * cfg.dt_s
            direction = heading_vec(new_heading)
            target = self.pose.position + direction.scaled(step_len)
            final = self._collide(self.pose.position, target)
            moved = final.dist(self.pose.position)
            self.pose = PlayerPose(final, new_heading)
        if moved > 0.0 and cfg.enhance.enabled and cfg.enhance.footsteps:
            self.player_footsteps.update(moved, self.pose.position, tick=t, sink=self.log)

        # patrolling enemies
        for e in self.scene.entities:
            if e.patrol is None:
                continue
            rt = self.rt[e.id]
            if not rt.alive:
                continue
            rt.patrol_ticks += 1
            pos, leg = _patrol_pos_leg(e.patrol, rt.patrol_ticks, cfg.dt_s)
            if leg != rt.leg:
                rt.leg = leg
                self._one_shot("fx", "squeak", pos, e.id)
            if rt.footsteps is not None:
                audible = pos.dist(self.pose.position) <= cfg.enemy_audible_range_m
                rt.footsteps.update(e.patrol.speed * cfg.dt_s, pos, tick=t, sink=self.log, source=e.id, audible=audible)

        effective = self.effective_scene()
        targeting = self.targeting_scene(effective)

        # combat
        if "RT" in edges_down:
            if self.aiming:
                effective, targeting = self._fire(targeting)
            else:
                self.log.game(t, "fire_ignored", {"reason": "not aiming"})

        # gate opening timer
        if self.gate_opens_at is not None and t >= self.gate_opens_at:
            self._open_gate()
            effective = self.effective_scene()
            targeting = self.targeting_scene(effective)

        # surveying block: one shared speech line, fixed order
        self.channel.position_resolver = lambda eid: self._resolve_center(eid)
        self.channel.tick(t, cfg.dt_ms, self.log)
        menu_allowed = cfg.tool in ("navmenu", "both")
        stick_allowed = cfg.tool in ("navstick", "both")
        if "LShoulder" in edges_down and menu_allowed:
            if self.menu.open:
                self.menu = menu_close(self.menu, tick=t, channel=self.channel, sink=self.log)
            else:
                force_release(self.scrub, t, self.channel, self.log)
                self.menu = menu_open(
                    effective, self.pose, tick=t, channel=self.channel, sink=self.log, cfg=cfg.navstick
                )
        if self.menu.open and menu_allowed:
            for btn, direction in (("DPadUp", "up"), ("DPadDown", "down")):
                if btn in edges_down:
                    self.menu = menu_step(
                        self.menu, direction, effective, tick=t, channel=self.channel, sink=self.log, cfg=cfg.navstick
                    )
        bearing = stick_to_bearing(self.right_stick, cfg.navstick)
        if stick_allowed:
            if self.menu.open and bearing is not None:
                self.menu = menu_close(self.menu, tick=t, channel=self.channel, sink=self.log)
            self.scrub = scrub_tick(
                self.scrub,
                LazyPie(targeting, self.pose),
                self.right_stick,
                cfg.dt_ms,
                cfg.navstick,
                scene=targeting,
                pose=self.pose,
                tick=t,
                channel=self.channel,
                sink=self.log,
                advance_channel=False,
            )
            if bearing is not None:
                self.log.game(t, "scrub_sample", {"bearing": bearing})
        if "RB" in edges_down:
            self._price_query(effective)
        if "LB" in edges_down:
            self._lb_action(targeting)

        # objectives
        self._objectives(effective)
        if self.terminal:
            return

        # segment timer
        if self.time_limit is not None:
            self._timer()

        # enhancements that watch the whole tick
        if self._quest_enabled():
            target = self._quest_target()
            if target != self.quest.target:
                self.quest.target = target
                self.quest.accumulated_turn = 0.0
                if target is not None:
                    quest_target_acquired(self.quest, self.pose, self.scene, tick=t, sink=self.log, cfg=cfg.enhance)
            if self.quest.target is not None:
                quest_tick(
                    self.quest, heading_at_start, self.pose.heading, self.pose, self.scene,
                    tick=t, sink=self.log, cfg=cfg.enhance,
                )
        if cfg.enhance.enabled and cfg.enhance.proximity:
            self.proximity.update(self.pose, effective, tick=t, sink=self.log, cfg=cfg.enhance)

    # --- helpers ----------------------------------------------------------

    def _resolve_center(self, entity_id: str) -> Optional[Vec2]:
        try:
            e = self.scene.entity(entity_id)
        except KeyError:
            return None
        return self._entity_position(e)

    def _one_shot(self, channel: str, payload, position: Vec2, source: Optional[str] = None) -> None:
        start = self.log.audio(self.tick, channel, "start", payload, position, source)
        self.log.audio(self.tick, channel, "stop", payload, position, source, ref=start.event_id)

    def _collide(self, start: Vec2, target: Vec2) -> Vec2:
        blockers = self._movement_blockers()

        def blocked(p: Vec2) -> bool:
            return any(contains(o.shape, p) for o in blockers)

        if not blocked(target):
            return target
        slide_x = Vec2(target.x, start.y)
        if not blocked(slide_x):
            return slide_x
        slide_y = Vec2(start.x, target.y)
        if not blocked(slide_y):
            return slide_y
        return start

    def _fire(self, targeting: Scene) -> tuple[Scene, Scene]:
        t = self.tick
        hit = cast_ray(targeting, self.pose, 0.0)
        pitch = 0.0
        entity = None
        if hit.kind == "poi":
            entity = self.scene.entity(hit.target)
        if entity is not None and entity.kind in ("enemy_stationary", "enemy_roaming") and self.rt[entity.id].alive:
            if self.cfg.enhance.enabled and self.cfg.enhance.vertical_aim:
                pitch = vertical_aim(self.pose, entity.id, targeting)
            self.rt[entity.id].alive = False
            pos = self._entity_position(entity)
            self._one_shot("fx", "defeat", pos, entity.id)
            self.log.game(t, "shot_fired", {"hit": entity.id, "result": "defeat", "pitch": pitch})
            self.log.game(t, "enemy_defeated", {"entity": entity.id})
            self.defeated += 1
            self._maybe_reveal()
        else:
            point = hit.point if hit.point is not None else (
                self.pose.position + heading_vec(self.pose.heading).scaled(self.cfg.miss_distance_m)
            )
            self._one_shot("fx", "miss", point, hit.target)
            self.log.game(t, "shot_fired", {"hit": hit.target, "result": "miss", "pitch": pitch})
        effective = self.effective_scene()
        return effective, self.targeting_scene(effective)

    def _maybe_reveal(self) -> None:
        spec = self.scene.segment
        if spec is None or self.revealed:
            return
        if spec.objective.kind == "defeat_then_checkpoint" and self.defeated >= spec.objective.count:
            self._reveal_checkpoint()

    def _reveal_checkpoint(self) -> None:
        for e in self.scene.entities:
            if e.kind == "checkpoint" and not self.rt[e.id].alive:
                self.rt[e.id].alive = True
                self.log.game(self.tick, "checkpoint_revealed", {"entity": e.id})
                self._one_shot("fx", "reveal", shape_center(e.shape), e.id)
        self.revealed = True

    def _open_gate(self) -> None:
        self.gate_opens_at = None
        self.gate_open = True
        for e in self.scene.entities:
            if e.kind == "door" and (e.id + GATE_BLOCKER_SUFFIX) in {o.id for o in self.scene.occluders}:
                self.rt[e.id].alive = False
                self.inactive_occluders.add(e.id + GATE_BLOCKER_SUFFIX)
                self.log.game(self.tick, "gate_opened", {"entity": e.id})
                self._one_shot("fx", "gate_open", shape_center(e.shape), e.id)
        spec = self.scene.segment
        if spec is not None and spec.objective.kind == "pressure_pad_gate":
            self._reveal_checkpoint()

    def _price_query(self, effective: Scene) -> None:
        state = self.menu if self.menu.open else self.scrub
        try:
            query_price(state, effective, tick=self.tick, channel=self.channel, sink=self.log, cfg=self.cfg.navstick)
        except SelectionError as e:
            self.log.game(self.tick, "price_query_failed", {"reason": str(e)})

    def _lb_action(self, targeting: Scene) -> None:
        t = self.tick
        if self.scene.teleport_enabled:
            eid = selected_entity_id(self.menu) or selected_entity_id(self.scrub)
            if eid is not None:
                try:
                    self.pose = teleport(self.pose, eid, self.effective_scene())
                    self.log.game(t, "teleported", {"target": eid})
                except TeleportError as e:
                    self.log.game(t, "teleport_failed", {"reason": str(e)})
                return
        if self.cfg.enhance.enabled and self.cfg.enhance.auto_turn:
            try:
                self.pose = auto_turn(self.pose, self.scrub, targeting)
                self.log.game(t, "auto_turned", {"target": self.scrub.slice_key[1]})
            except EnhanceError:
                pass

    def _objectives(self, effective: Scene) -> None:
        t = self.tick
        spec = self.scene.segment
        # pressure pad: stand on it
        if spec is not None and spec.objective.kind == "pressure_pad_gate" and not self.pad_pressed:
            for e in self.scene.entities:
                if e.kind != "pressure_pad" or not self.rt[e.id].alive:
                    continue
                center = shape_center(e.shape)
                radius = e.shape.radius if isinstance(e.shape, Circle) else 0.7
                if self.pose.position.dist(center) <= radius:
                    self.pad_pressed = True
                    self.gate_opens_at = t + round(self.cfg.gate_open_delay_s / self.cfg.dt_s)
                    self.log.game(t, "pad_pressed", {"entity": e.id})
                    self._one_shot("fx", "pad_press", center, e.id)
        # ordered visits (room task)
        if spec is None and self.scene.visit_order:
            if self.visit_index < len(self.scene.visit_order):
                target = self.scene.entity(self.scene.visit_order[self.visit_index])
                center = self._entity_position(target)
                if self.pose.position.dist(center) <= self.cfg.checkpoint_radius_m:
                    self.log.game(t, "visit_progress", {"index": self.visit_index, "entity": target.id})
                    self._one_shot("fx", "visit", center, target.id)
                    self.visit_index += 1
                    if self.visit_index == len(self.scene.visit_order):
                        self._complete()
                        return
        # checkpoint arrival
        if spec is not None:
            for e in self.scene.entities:
                if e.kind != "checkpoint" or not self.rt[e.id].alive:
                    continue
                center = shape_center(e.shape)
                if self.pose.position.dist(center) <= self.cfg.checkpoint_radius_m:
                    self._one_shot("fx", "checkpoint", center, e.id)
                    self._complete()
                    return

    def _complete(self) -> None:
        elapsed = (self.tick - self.segment_start_tick) * self.cfg.dt_s
        self._close_audio()
        self.completed = True
        self.log.game(
            self.tick,
            "segment_completed",
            {"scene": self.scene.id, "attempt": self.attempt, "time_s": round(elapsed, 6)},
        )

    def _timer(self) -> None:
        t = self.tick
        remaining = self.time_remaining
        prev = remaining + self.cfg.dt_s
        for m in TIME_MILESTONES:
            if prev > m >= remaining and m not in self._announced_milestones and self.time_limit > m:
                self._announced_milestones.add(m)
                self._one_shot("fx", f"{m} seconds remaining", self.pose.position)
        whole = math.ceil(remaining - 1e-9)
        if self._last_whole_second is None:
            self._last_whole_second = whole
        elif whole < self._last_whole_second:
            self._last_whole_second = whole
            if remaining > 0:
                self._one_shot("fx", "clock_tick", self.pose.position)
        if remaining <= 0:
            self._fail()

    def _fail(self) -> None:
        self._close_audio()
        self.log.game(
            self.tick,
            "segment_failed",
            {"scene": self.scene.id, "attempt": self.attempt, "reason": "time"},
        )
        if self.attempt + 1 > self.max_attempts:
            self.exhausted = True
            return
        self._begin_attempt(self.attempt + 1)

    def _close_audio(self) -> None:
        force_release(self.scrub, self.tick, self.channel, self.log)
        self.channel.close(self.tick, self.log)
        self.proximity.close(self.tick, self.effective_scene(), self.log)
        if self.menu.open:
            self.menu = menu_close(self.menu, tick=self.tick, channel=self.channel, sink=self.log)

    def finish(self) -> None:
        """End the session: every active sound gets its stop."""
        self._close_audio()

    # --- public ops -------------------------------------------------------

    def fire(self) -> None:
        """Manual trigger outside the input path (tests, tooling)."""
        if not self.aiming:
            self.log.game(self.tick, "fire_ignored", {"reason": "not aiming"})
            return
        self._fire(self.targeting_scene())

    def objective_status(self) -> dict:
        spec = self.scene.segment
        cps = [e for e in self.scene.entities if e.kind == "checkpoint"]
        cp_alive = any(self.rt[e.id].alive for e in cps)
        status = {
            "kind": spec.objective.kind if spec else ("visit_order" if self.scene.visit_order else "free"),
            "defeated": self.defeated,
            "required": spec.objective.count if spec else 0,
            "checkpoint_revealed": cp_alive,
            "checkpoint_reached": self.completed,
            "gate_open": self.gate_open,
            "pad_pressed": self.pad_pressed,
            "time_remaining": None if self.time_remaining is None else round(self.time_remaining, 6),
            "attempt": self.attempt,
            "completed": self.completed,
            "exhausted": self.exhausted,
            "visit_index": self.visit_index,
        }
        return status


def _patrol_pos_leg(p: Patrol, ticks: int, dt_s: float) -> tuple[Vec2, int]:
    length = p.a.dist(p.b)
    total = ticks * p.speed * dt_s
    traveled = math.fmod(total, 2.0 * length)
    leg = int(total / length) % 2
    direction = (p.b - p.a).scaled(1.0 / length)
    if traveled < length:
        return p.a + direction.scaled(traveled), leg
    return p.b - direction.scaled(traveled - length), leg
