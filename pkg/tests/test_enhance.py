from __future__ import annotations

import math
import random

import pytest

from navstick.config import EnhanceConfig
from navstick.enhance import (
    EnhanceError,
    FootstepTracker,
    ProximityNotifier,
    QuestState,
    auto_turn,
    footstep_update,
    quest_tick,
    scale_colliders,
    vertical_aim,
)
from navstick.events import EventLog, validate_log
from navstick.geometry import Circle, Vec2, heading_vec, world_angle
from navstick.scene import Entity, PlayerPose, Scene
from navstick.stick import ScrubState
from navstick.visibility import compute_navpie

CFG = EnhanceConfig()


def quest_scene():
    cp = Entity("cp-1", "Checkpoint", "checkpoint", Circle(Vec2(3, 4), 0.5))
    scene = Scene(id="q", spawn=PlayerPose(Vec2(0, 0), 0), entities=(cp,), occluders=())
    return scene, PlayerPose(Vec2(0, 0), 0.0)


def quest_tones(sink):
    return [e for e in sink.audio_events if e.channel == "quest" and e.action == "start"]


def test_quest_below_threshold_no_tone():
    scene, pose = quest_scene()
    sink = EventLog()
    q = QuestState(target="cp-1")
    q = quest_tick(q, 0.0, 14.9, pose, scene, tick=1, sink=sink, cfg=CFG)
    assert quest_tones(sink) == []
    assert q.accumulated_turn == pytest.approx(14.9)


def test_quest_two_tones_for_thirty_degrees():
    scene, pose = quest_scene()
    sink = EventLog()
    q = QuestState(target="cp-1")
    quest_tick(q, 0.0, 30.0, pose, scene, tick=1, sink=sink, cfg=CFG)
    assert len(quest_tones(sink)) == 2
    assert q.accumulated_turn == pytest.approx(0.0)


def test_quest_tone_position_fixed_distance_toward_target():
    scene, pose = quest_scene()
    sink = EventLog()
    q = QuestState(target="cp-1")
    quest_tick(q, 0.0, 20.0, pose, scene, tick=1, sink=sink, cfg=CFG)
    tone = quest_tones(sink)[0]
    toward = world_angle(Vec2(3, 4) - pose.position)
    expected = pose.position + heading_vec(toward).scaled(CFG.quest_tone_distance_m)
    assert tone.position == expected
    assert abs(tone.position.dist(pose.position) - 2.0) < 1e-9


def test_quest_total_count_property():
    scene, pose = quest_scene()
    rng = random.Random(9)
    sink = EventLog()
    q = QuestState(target="cp-1")
    heading = 0.0
    total = 0.0
    for tick in range(1, 400):
        step = rng.uniform(-6.0, 6.0)
        new = (heading + step) % 360.0
        d = abs(new - heading) % 360.0
        total += min(d, 360.0 - d)
        q = quest_tick(q, heading, new, pose, scene, tick=tick, sink=sink, cfg=CFG)
        heading = new
    assert len(quest_tones(sink)) == int(total // CFG.quest_turn_deg)
    assert 0.0 <= q.accumulated_turn < CFG.quest_turn_deg


def test_quest_missing_target():
    scene, pose = quest_scene()
    with pytest.raises(EnhanceError):
        quest_tick(QuestState(), 0, 20, pose, scene, tick=1, sink=EventLog(), cfg=CFG)


def test_auto_turn_brings_target_to_twelve_oclock():
    target = Entity("a", "A", "item", Circle(Vec2(6, 0), 0.5))  # due east
    scene = Scene(id="a", spawn=PlayerPose(Vec2(0, 0), 0), entities=(target,), occluders=())
    pose = PlayerPose(Vec2(0, 0), 0.0)
    scrub = ScrubState(slice_key=("poi", "a"))
    turned = auto_turn(pose, scrub, scene)
    assert turned.heading == pytest.approx(90.0)
    assert turned.position == pose.position
    # target already ahead: identity
    again = auto_turn(turned, scrub, scene)
    assert again == turned
    # recomputing the pie puts the target's slice over 0°
    pie = compute_navpie(scene, turned)
    assert pie.slice_at(0.0).label == ("poi", "a")


def test_auto_turn_requires_poi_slice():
    scene, pose = quest_scene()
    with pytest.raises(EnhanceError):
        auto_turn(pose, ScrubState(slice_key=("nothing", None)), scene)
    with pytest.raises(EnhanceError):
        auto_turn(pose, ScrubState(), scene)


def test_proximity_enter_hysteresis_exit():
    cp = Entity("cp-1", "Checkpoint", "checkpoint", Circle(Vec2(0, 0), 0.5))
    scene = Scene(id="p", spawn=PlayerPose(Vec2(0, 10), 0), entities=(cp,), occluders=())
    notifier = ProximityNotifier()
    sink = EventLog()

    def at(y, tick):
        notifier.update(PlayerPose(Vec2(0, y), 0), scene, tick=tick, sink=sink, cfg=CFG)

    at(10.0, 1)
    assert sink.audio_events == []  # far away: nothing
    at(2.9, 2)  # inside the 3 m radius
    starts = [e for e in sink.audio_events if e.action == "start"]
    assert len(starts) == 1 and starts[0].payload == "ambient:checkpoint"
    at(3.1, 3)  # outside radius but inside hysteresis band
    assert len([e for e in sink.audio_events if e.action == "stop"]) == 0
    at(3.3, 4)  # past radius + 0.25
    stops = [e for e in sink.audio_events if e.action == "stop"]
    assert len(stops) == 1 and stops[0].ref == starts[0].event_id
    assert validate_log(sink.lines()) == []


def test_proximity_kinds_without_radius_silent():
    item = Entity("item-1", "Honey", "item", Circle(Vec2(0, 1), 0.5), price="6.99")
    scene = Scene(id="p", spawn=PlayerPose(Vec2(0, 0), 0), entities=(item,), occluders=())
    notifier = ProximityNotifier()
    sink = EventLog()
    notifier.update(PlayerPose(Vec2(0, 0.8), 0), scene, tick=1, sink=sink, cfg=CFG)
    assert sink.audio_events == []


def test_footsteps_cadence():
    sink = EventLog()
    tracker = FootstepTracker(CFG.stride_m)
    dt = 1.0 / 60.0
    # standing still: nothing
    for t in range(1, 61):
        footstep_update(0.0, dt, tracker, Vec2(0, 0), tick=t, sink=sink)
    assert sink.audio_events == []
    # 1.4 m/s for one second: exactly 2 footsteps
    steps = 0
    for t in range(61, 121):
        steps += footstep_update(1.4, dt, tracker, Vec2(0, 0), tick=t, sink=sink)
    assert steps == 2
    # doubling speed halves the period (4 steps in the same time)
    tracker2 = FootstepTracker(CFG.stride_m)
    sink2 = EventLog()
    steps2 = 0
    for t in range(1, 61):
        steps2 += footstep_update(2.8, dt, tracker2, Vec2(0, 0), tick=t, sink=sink2)
    assert steps2 == 4


def test_scale_colliders_doubles_targeting_radius():
    poi = Entity("a", "A", "item", Circle(Vec2(0, 5), 0.5))
    prop = Entity("b", "B", "item", Circle(Vec2(5, 0), 0.5), is_poi=False)
    scene = Scene(id="s", spawn=PlayerPose(Vec2(0, 0), 0), entities=(poi, prop), occluders=())
    scaled = scale_colliders(scene, 2.0)
    assert scaled.entity("a").shape.radius == 1.0
    assert scaled.entity("b").shape.radius == 0.5  # non-POI untouched
    assert scale_colliders(scene, 1.0) is scene


def test_scaled_slice_is_superset():
    poi = Entity("a", "A", "item", Circle(Vec2(0, 5), 0.5))
    scene = Scene(id="s", spawn=PlayerPose(Vec2(0, 0), 0), entities=(poi,), occluders=())
    pose = PlayerPose(Vec2(0, 0), 0.0)
    base = compute_navpie(scene, pose)
    big = compute_navpie(scale_colliders(scene, 2.0), pose)
    for k in range(3600):
        b = k * 0.1
        if base.slice_at(b).label == ("poi", "a"):
            assert big.slice_at(b).label == ("poi", "a")


def test_vertical_aim_stub():
    scene, pose = quest_scene()
    assert vertical_aim(pose, "cp-1", scene) == 0.0
    dead = Entity("cp-1", "Checkpoint", "checkpoint", Circle(Vec2(3, 4), 0.5), alive=False)
    scene2 = Scene(id="q", spawn=pose, entities=(dead,), occluders=())
    with pytest.raises(EnhanceError):
        vertical_aim(pose, "cp-1", scene2)
