from __future__ import annotations

import math

import numpy as np
import pytest

from navstick.geometry import Circle, Rect, Segment, Vec2
from navstick.scene import Entity, Occluder, PlayerPose, Scene
from navstick.visibility import (
    NOTHING,
    DegeneratePoseError,
    cast_ray,
    compute_navpie,
    oracle_navpie,
    slice_at,
)
from conftest import random_scene


def scene_with(entities=(), occluders=(), heading=0.0):
    return (
        Scene(id="t", spawn=PlayerPose(Vec2(0, 0), heading), entities=tuple(entities), occluders=tuple(occluders)),
        PlayerPose(Vec2(0, 0), heading),
    )


def test_cast_ray_empty_scene():
    scene, pose = scene_with()
    hit = cast_ray(scene, pose, 123.4)
    assert hit.kind == "nothing"
    assert hit.label == NOTHING


def test_cast_ray_circle_dead_ahead():
    e = Entity("a", "A", "item", Circle(Vec2(0, 5), 1.0))
    scene, pose = scene_with([e])
    hit = cast_ray(scene, pose, 0.0)
    assert hit.kind == "poi" and hit.target == "a"
    assert hit.distance == pytest.approx(4.0, abs=1e-12)


def test_cast_ray_occluded_poi():
    e = Entity("a", "A", "item", Circle(Vec2(0, 10), 1.0))
    tree = Occluder("tree", Circle(Vec2(0, 5), 0.8), True, True)
    scene, pose = scene_with([e], [tree])
    hit = cast_ray(scene, pose, 0.0)
    assert hit.kind == "obstruction" and hit.target == "tree"
    assert hit.distance == pytest.approx(4.2, abs=1e-12)
    assert hit.point.y == pytest.approx(4.2, abs=1e-12)


def test_cast_ray_ignores_transparent_walls():
    wall = Occluder("w", Rect(Vec2(-1, 2), Vec2(1, 2.2)), True, False)
    e = Entity("a", "A", "item", Circle(Vec2(0, 10), 1.0))
    scene, pose = scene_with([e], [wall])
    assert cast_ray(scene, pose, 0.0).target == "a"


def test_cast_ray_dead_entities_excluded():
    e = Entity("a", "A", "enemy_stationary", Circle(Vec2(0, 5), 1.0), alive=False)
    scene, pose = scene_with([e])
    assert cast_ray(scene, pose, 0.0).kind == "nothing"


def test_cast_ray_heading_frame():
    e = Entity("a", "A", "item", Circle(Vec2(5, 0), 0.5))  # due east
    scene, pose = scene_with([e], heading=90.0)
    assert cast_ray(scene, pose, 0.0).target == "a"  # east is forward now


def test_empty_scene_pie():
    scene, pose = scene_with()
    pie = compute_navpie(scene, pose)
    assert pie.slices == (type(pie.slices[0])(0.0, 360.0, NOTHING),)


def test_single_circle_closed_form_extent():
    e = Entity("a", "A", "item", Circle(Vec2(0, 5), 1.0))
    scene, pose = scene_with([e])
    pie = compute_navpie(scene, pose)
    poi = [s for s in pie.slices if s.label == ("poi", "a")]
    assert len(poi) == 1
    expected = 2.0 * math.degrees(math.asin(1.0 / 5.0))
    assert poi[0].extent == pytest.approx(expected, abs=1e-3)
    # centered at 0: wraps north
    assert poi[0].start == pytest.approx(360.0 - expected / 2.0, abs=1e-6)
    assert poi[0].end == pytest.approx(expected / 2.0, abs=1e-6)


def test_partition_sums_to_360():
    for seed in range(40):
        scene, pose = random_scene(seed)
        pie = compute_navpie(scene, pose)
        total = sum(s.extent for s in pie.slices)
        assert total == pytest.approx(360.0, abs=1e-6)
        # sorted, non-overlapping
        starts = [s.start for s in pie.slices]
        assert starts == sorted(starts)
        # adjacent labels distinct
        for a, b in zip(pie.slices, pie.slices[1:]):
            assert a.label != b.label
        if len(pie.slices) > 1:
            assert pie.slices[0].label != pie.slices[-1].label


def test_oracle_equivalence_sample():
    mismatches = 0
    for seed in range(120):
        scene, pose = random_scene(seed)
        pie = compute_navpie(scene, pose)
        n = 7200
        bearings = np.arange(n) * (360.0 / n)
        oracle = oracle_navpie(scene, pose, n)
        bounds = np.array(sorted(s.start for s in pie.slices))
        for k in range(0, n, 7):
            b = float(bearings[k])
            if bounds.size:
                d = np.min(np.minimum(np.abs(bounds - b), 360.0 - np.abs(bounds - b)))
                if d <= 0.1:
                    continue
            assert pie.slice_at(b).label == oracle.slice_at(b).label, (seed, b)
    assert mismatches == 0


def test_oracle_extent_resolution():
    e = Entity("a", "A", "item", Circle(Vec2(0, 5), 1.0))
    scene, pose = scene_with([e])
    n = 3600
    pie = oracle_navpie(scene, pose, n)
    poi = [s for s in pie.slices if s.label == ("poi", "a")]
    expected = 2.0 * math.degrees(math.asin(1.0 / 5.0))
    assert len(poi) == 1
    assert abs(poi[0].extent - expected) <= 360.0 / n + 1e-9


def test_oracle_empty_scene():
    scene, pose = scene_with()
    pie = oracle_navpie(scene, pose, 3600)
    assert len(pie.slices) == 1 and pie.slices[0].label == NOTHING


def test_slice_at_wraparound_and_half_open():
    e = Entity("a", "A", "item", Circle(Vec2(0, 5), 1.0))
    scene, pose = scene_with([e])
    pie = compute_navpie(scene, pose)
    assert slice_at(pie, 0.0).label == ("poi", "a")  # wrap slice covers north
    poi = [s for s in pie.slices if s.label[0] == "poi"][0]
    # at a slice start, you get that slice (half-open)
    assert slice_at(pie, poi.start).label == poi.label
    assert slice_at(pie, poi.end).label == NOTHING
    scene2, pose2 = scene_with()
    assert slice_at(compute_navpie(scene2, pose2), 123.4).label == NOTHING


def test_occlusion_monotonicity():
    for seed in range(25):
        scene, pose = random_scene(seed, max_shapes=6)
        tree = Occluder("zz-new-tree", Circle(Vec2(3.0, 3.0), 1.0), True, True)
        scene2 = Scene(
            id=scene.id,
            spawn=scene.spawn,
            entities=scene.entities,
            occluders=scene.occluders + (tree,),
        )
        n = 1441
        for k in range(n):
            b = k * 360.0 / n
            before = cast_ray(scene, pose, b)
            after = cast_ray(scene2, pose, b)
            if before.kind == "obstruction":
                assert after.kind == "obstruction"
            if before.kind == "poi":
                assert after.kind in ("poi", "obstruction")
                if after.kind == "poi":
                    assert after.target == before.target


def test_frame_covariance():
    scene, pose = random_scene(5)
    delta = 37.25
    pie1 = compute_navpie(scene, pose)
    pose2 = PlayerPose(pose.position, pose.heading + delta)
    pie2 = compute_navpie(scene, pose2)
    b1 = sorted((s.start - 0.0) % 360.0 for s in pie1.slices)
    b2 = sorted((s.start + delta) % 360.0 for s in pie2.slices)
    assert len(b1) == len(b2)
    for x, y in zip(b1, b2):
        d = min(abs(x - y), 360.0 - abs(x - y))
        assert d < 1e-6
    # labels preserved under rotation
    labels1 = {s.label for s in pie1.slices}
    labels2 = {s.label for s in pie2.slices}
    assert labels1 == labels2


def test_degenerate_pose_inside_sight_blocker():
    occ = Occluder("box", Rect(Vec2(-1, -1), Vec2(1, 1)), True, True)
    scene, pose = scene_with([], [occ])
    with pytest.raises(DegeneratePoseError):
        compute_navpie(scene, pose)


def test_pose_inside_walkover_entity_is_fine():
    pad = Entity("pad", "Pressure Pad", "pressure_pad", Circle(Vec2(0, 0), 1.0))
    far = Entity("a", "A", "item", Circle(Vec2(0, 6), 0.5))
    scene, pose = scene_with([pad, far])
    pie = compute_navpie(scene, pose)
    assert ("poi", "a") in {s.label for s in pie.slices}
    assert ("poi", "pad") not in {s.label for s in pie.slices}


def test_tie_break_by_id():
    # two circles at identical distance dead ahead; lexicographic id wins
    e1 = Entity("b-far", "B", "item", Circle(Vec2(0, 5), 1.0))
    e2 = Entity("a-near", "A", "item", Circle(Vec2(0, 5), 1.0))
    scene, pose = scene_with([e1, e2])
    assert cast_ray(scene, pose, 0.0).target == "a-near"


def test_pie_fixture_tables():
    from pathlib import Path

    from navstick.visibility import verify_pie_fixture

    for name in ("single_circle", "five_objects"):
        text = (Path(__file__).parent / "data" / "pies" / f"{name}.json").read_text()
        assert verify_pie_fixture(text) == [], name


def test_pie_fixture_detects_drift():
    from pathlib import Path

    from navstick.visibility import verify_pie_fixture

    text = (Path(__file__).parent / "data" / "pies" / "single_circle.json").read_text()
    corrupted = text.replace('"label": "poi:a"', '"label": "poi:b"')
    assert verify_pie_fixture(corrupted) != []


def test_fig2_style_fixture_order():
    # five objects of varying sizes around the player; each appears once,
    # in circular bearing order
    entities = [
        Entity("obj-a", "A", "item", Circle(Vec2(0.0, 6.0), 1.2)),
        Entity("obj-b", "B", "item", Circle(Vec2(5.0, 2.0), 0.6)),
        Entity("obj-c", "C", "item", Rect(Vec2(3.0, -5.0), Vec2(5.0, -3.0))),
        Entity("obj-d", "D", "item", Circle(Vec2(-4.0, -4.0), 0.9)),
        Entity("obj-e", "E", "item", Segment(Vec2(-6.0, 1.0), Vec2(-4.0, 3.0))),
    ]
    for spawn in (Vec2(0.0, 0.0), Vec2(1.5, -1.0)):
        pose = PlayerPose(spawn, 0.0)
        scene = Scene(id="fig", spawn=pose, entities=tuple(entities), occluders=())
        pie = compute_navpie(scene, pose)
        poi_slices = [s for s in pie.slices if s.label[0] == "poi"]
        names = [s.label[1] for s in poi_slices]
        assert sorted(names) == ["obj-a", "obj-b", "obj-c", "obj-d", "obj-e"]
        # circular order == order of center bearings
        from navstick.geometry import shape_center, world_angle

        def bearing_of(eid: str) -> float:
            c = shape_center(scene.entity(eid).shape)
            return (world_angle(c - spawn) - pose.heading) % 360.0

        by_bearing = sorted(names, key=bearing_of)
        start = names.index(by_bearing[0])
        rotated = names[start:] + names[:start]
        assert rotated == by_bearing
