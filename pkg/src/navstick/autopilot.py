"""Scripted players: synthesize input traces by driving a live runtime.

A pilot simulates the world while choosing inputs, recording every tick;
the recorded trace then replays deterministically through `replay`.
Pilots navigate by steering toward authored waypoints and aim with
one-tick lead prediction, so the traces they emit complete segments
reliably and in bounded time.
"""
from __future__ import annotations

import math
from typing import Optional

from .config import EngineConfig
from .geometry import Vec2, world_angle
from .scene import Scene, gen_aisle, gen_segment, gen_terraformers
from .sim import GameRuntime, InputSample, _patrol_pos_leg
from .stick import StickSample

ZERO = StickSample(0.0, 0.0)


class PilotError(RuntimeError):
    pass


def _signed_delta(d: float) -> float:
    return (d + 180.0) % 360.0 - 180.0


class Pilot:
    def __init__(self, scene: Scene, config: Optional[EngineConfig] = None, seed: int = 0):
        self.cfg = config or EngineConfig()
        self.runtime = GameRuntime(scene, self.cfg, seed=seed)
        self.records: list[InputSample] = []

    @property
    def pose(self):
        return self.runtime.pose

    def push(self, ls: StickSample = ZERO, rs: StickSample = ZERO, buttons: Optional[dict] = None) -> None:
        sample = InputSample(self.runtime.tick + 1, ls, rs, dict(buttons or {}))
        self.records.append(sample)
        self.runtime.step(sample)

    def idle(self, ticks: int) -> None:
        for _ in range(ticks):
            self.push()

    def idle_until(self, predicate, max_ticks: int = 3600, what: str = "condition") -> None:
        for _ in range(max_ticks):
            if predicate():
                return
            self.push()
        raise PilotError(f"{what} not reached in {max_ticks} ticks")

    def _turn_per_tick(self) -> float:
        return self.cfg.turn_rate_dps * self.cfg.dt_s

    def face(self, world_deg: float, max_ticks: int = 400) -> None:
        for _ in range(max_ticks):
            err = _signed_delta(world_deg - self.pose.heading)
            if abs(err) <= 1e-6:
                return
            x = max(-1.0, min(1.0, err / self._turn_per_tick()))
            self.push(ls=StickSample(x, 0.0))
        raise PilotError(f"could not face {world_deg}")

    def walk_to(self, target: Vec2, tol: float = 0.5, max_ticks: int = 8000) -> None:
        for _ in range(max_ticks):
            if self.runtime.terminal:
                return
            pos = self.pose.position
            if pos.dist(target) <= tol:
                return
            desired = world_angle(target - pos)
            err = _signed_delta(desired - self.pose.heading)
            x = max(-1.0, min(1.0, err / self._turn_per_tick()))
            y = 1.0 if abs(err) <= 45.0 else 0.0
            self.push(ls=StickSample(x, y))
        raise PilotError(f"could not reach {target}")

    def _enemy_next_pos(self, entity_id: str) -> Vec2:
        e = self.runtime.scene.entity(entity_id)
        if e.patrol is None:
            return self.runtime._entity_position(e)
        pos, _ = _patrol_pos_leg(e.patrol, self.runtime.rt[entity_id].patrol_ticks + 1, self.cfg.dt_s)
        return pos

    def fire_at(self, entity_id: str, max_ticks: int = 3000) -> None:
        """Aim with one-tick lead and shoot; walks closer when occluded."""
        per_tick = self._turn_per_tick()
        self.push(buttons={"LT": "down"})
        spent = 0
        while self.runtime.rt[entity_id].alive:
            if spent > max_ticks:
                raise PilotError(f"could not defeat {entity_id}")
            pred = self._enemy_next_pos(entity_id)
            err = _signed_delta(world_angle(pred - self.pose.position) - self.pose.heading)
            if abs(err) <= per_tick:
                self.push(ls=StickSample(err / per_tick, 0.0), buttons={"RT": "down"})
                self.push(buttons={"RT": "up"})
                spent += 2
                if self.runtime.rt[entity_id].alive:
                    # line of fire blocked: step toward the enemy and retry
                    self.push(buttons={"LT": "up"})
                    here = self.pose.position
                    toward = self._enemy_next_pos(entity_id)
                    step = (toward - here).scaled(1.0 / max(toward.dist(here), 1e-9))
                    self.walk_to(here + step.scaled(1.5), tol=0.3, max_ticks=600)
                    self.push(buttons={"LT": "down"})
                    spent += 600
            else:
                self.push(ls=StickSample(max(-1.0, min(1.0, err / per_tick)), 0.0))
                spent += 1
        self.push(buttons={"LT": "up"})

    def scrub_circle(self, total_deg: float = 372.0, ticks: int = 1240) -> None:
        for i in range(ticks):
            bearing = math.radians(i * total_deg / ticks)
            self.push(rs=StickSample(0.9 * math.sin(bearing), 0.9 * math.cos(bearing)))
        self.push()  # release

    def press(self, button: str) -> None:
        self.push(buttons={button: "down"})
        self.push(buttons={button: "up"})

    def finish(self) -> list[InputSample]:
        self.push()
        self.runtime.finish()
        return self.records


# --- canned traces --------------------------------------------------------


def aisle_survey_trace(seed: int = 0, config: Optional[EngineConfig] = None) -> tuple[Scene, list[InputSample]]:
    """Stationary full-circle scrub of the aisle: hits every item slice."""
    scene = gen_aisle(seed)
    pilot = Pilot(scene, config)
    pilot.idle(5)
    pilot.scrub_circle()
    pilot.idle(30)
    return scene, pilot.finish()


def terraformers_trace(config: Optional[EngineConfig] = None) -> tuple[Scene, list[InputSample]]:
    """Room completion: terminal on foot, key via menu teleport, then
    keyhole and exit door on foot."""
    scene = gen_terraformers()
    pilot = Pilot(scene, config)
    rt = pilot.runtime

    def center(eid: str) -> Vec2:
        from .geometry import shape_center

        return shape_center(scene.entity(eid).shape)

    pilot.walk_to(center("terminal-1"), tol=1.0)
    pilot.idle_until(lambda: rt.visit_index >= 1, what="terminal visit")
    pilot.press("LShoulder")  # menu: Door, Key, Keyhole, Terminal
    pilot.idle(12)
    pilot.press("DPadDown")
    pilot.idle(12)
    pilot.press("DPadDown")  # cursor on "Key"
    pilot.idle(12)
    pilot.press("LB")  # teleport to the key
    pilot.idle_until(lambda: rt.visit_index >= 2, max_ticks=600, what="key visit")
    pilot.press("LShoulder")  # close the menu
    pilot.walk_to(center("keyhole-1"), tol=1.0)
    pilot.idle_until(lambda: rt.visit_index >= 3, what="keyhole visit")
    pilot.walk_to(Vec2(5.6, 0.0), tol=0.4)
    pilot.idle_until(lambda: rt.completed, max_ticks=1200, what="door visit")
    return scene, pilot.finish()


def segment_trace(n: int, config: Optional[EngineConfig] = None, slow_fail: bool = False) -> tuple[Scene, list[InputSample]]:
    """Completion traces for the eight adventure segments. With
    `slow_fail` (segment 5), burn the first attempt's clock, then win on
    attempt 2."""
    scene, spec = gen_segment(n)
    pilot = Pilot(scene, config)
    rt = pilot.runtime

    def kill_all(ids: list[str]) -> None:
        for eid in ids:
            pilot.fire_at(eid)

    enemies = [e.id for e in scene.entities if e.kind.startswith("enemy")]

    if slow_fail:
        if spec.time_limit is None:
            raise PilotError("slow_fail needs a timed segment")
        pilot.idle_until(lambda: rt.attempt == 2, max_ticks=int(spec.time_limit * 60) + 120, what="first failure")

    if n == 1:
        pilot.walk_to(Vec2(5.0, 4.0), tol=0.5)
        pilot.walk_to(Vec2(5.0, 10.0), tol=0.5)
        pilot.walk_to(Vec2(0.0, 14.0), tol=1.0)
    elif n in (2, 5):
        kill_all(enemies)
        pilot.walk_to(Vec2(0.0, 15.0 if n == 5 else 14.0), tol=1.0)
    elif n == 3:
        kill_all(enemies)
        pilot.walk_to(Vec2(0.0, 12.0), tol=1.0)
    elif n == 4:
        pilot.walk_to(Vec2(5.0, 4.0), tol=0.4)
        pilot.walk_to(Vec2(5.0, 8.0), tol=0.4)
        pilot.idle_until(lambda: rt.gate_open, what="gate open")
        pilot.walk_to(Vec2(0.0, 12.0), tol=0.5)
        pilot.walk_to(Vec2(0.0, 18.0), tol=1.0)
    elif n == 6:
        pilot.walk_to(Vec2(0.0, 18.0), tol=1.0)
    elif n == 7:
        pilot.walk_to(Vec2(0.0, 19.0), tol=1.0)
    else:  # 8
        pilot.walk_to(Vec2(21.0, 0.0), tol=0.5)
        pilot.walk_to(Vec2(22.0, -5.0), tol=0.4)
        pilot.idle_until(lambda: rt.gate_open, what="gate open")
        pilot.walk_to(Vec2(22.0, 0.0), tol=0.5)
        pilot.walk_to(Vec2(26.5, 0.0), tol=1.0)
    pilot.idle_until(lambda: rt.completed, max_ticks=300, what="segment completion")
    return scene, pilot.finish()
