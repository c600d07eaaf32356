from __future__ import annotations

import pytest

from navstick.docs import DocumentError
from navstick.geometry import Circle, Rect, Vec2
from navstick.scene import (
    AISLE_SLOT_LENGTH,
    DEFAULT_CATALOG,
    Entity,
    Occluder,
    PlayerPose,
    Scene,
    gen_aisle,
    gen_segment,
    gen_terraformers,
    gen_trial,
    load_scene,
    save_scene,
)

MINIMAL = """
{
  "meta": {"area": null, "id": "mini", "teleport_enabled": false, "visit_order": []},
  "player_spawn": {"heading": 0.0, "position": {"x": 0.0, "y": 0.0}},
  "entities": [
    {"alive": true, "id": "cp-1", "is_poi": true, "kind": "checkpoint", "name": "Checkpoint",
     "patrol": null, "price": null, "shape": {"kind": "circle", "center": {"x": 0.0, "y": 5.0}, "radius": 0.5}}
  ],
  "occluders": [],
  "segment": null
}
"""


def test_minimal_document_loads():
    scene = load_scene(MINIMAL)
    assert len(scene.entities) == 1
    assert len(scene.occluders) == 0
    assert scene.entities[0].kind == "checkpoint"


def test_roamer_without_patrol_rejected():
    bad = MINIMAL.replace('"kind": "checkpoint"', '"kind": "enemy_roaming"')
    with pytest.raises(DocumentError, match="cp-1"):
        load_scene(bad)


def test_price_on_non_item_rejected():
    bad = MINIMAL.replace('"price": null', '"price": "1.99"')
    with pytest.raises(DocumentError, match="cp-1"):
        load_scene(bad)


def test_parse_error_carries_line():
    with pytest.raises(DocumentError, match="line"):
        load_scene("{ nope }")


def test_save_load_roundtrip_identity():
    for scene in (gen_aisle(3), gen_terraformers(), gen_segment(8)[0], gen_trial(1)):
        text = save_scene(scene)
        again = save_scene(load_scene(text))
        assert again == text


def test_aisle_fixture_counts(aisle_scene):
    items = [e for e in aisle_scene.entities if e.kind == "item"]
    assert len(items) == 8
    movers = [o for o in aisle_scene.occluders if o.blocks_movement]
    assert len(movers) == 2
    assert all(not o.blocks_sight for o in movers)


def test_aisle_deterministic():
    assert save_scene(gen_aisle(0)) == save_scene(gen_aisle(0))
    assert save_scene(gen_aisle(0)) != save_scene(gen_aisle(1))


def test_aisle_airtight_slots():
    scene = gen_aisle(7)
    items = [e for e in scene.entities if e.kind == "item"]
    west = sorted((e for e in items if e.shape.min.x < 0), key=lambda e: e.shape.min.y)
    east = sorted((e for e in items if e.shape.min.x > 0), key=lambda e: e.shape.min.y)
    assert len(west) == 4 and len(east) == 4
    for side in (west, east):
        for a, b in zip(side, side[1:]):
            assert b.shape.min.y - a.shape.max.y == 0.0  # airtight
        for e in side:
            assert e.shape.max.y - e.shape.min.y == AISLE_SLOT_LENGTH


def test_aisle_spawn_between_walls():
    scene = gen_aisle(11)
    north = scene.occluder("wall-north").shape
    south = scene.occluder("wall-south").shape
    spawn = scene.spawn.position
    assert south.max.y < spawn.y < north.min.y
    assert north.min.x < spawn.x < north.max.x


def test_aisle_catalog_too_small():
    with pytest.raises(DocumentError, match="catalog"):
        gen_aisle(0, DEFAULT_CATALOG[:5])


def test_terraformers_pois():
    scene = gen_terraformers()
    pois = [e for e in scene.entities if e.is_poi]
    assert sorted(e.kind for e in pois) == ["checkpoint", "door", "key", "keyhole", "terminal"] or len(pois) == 4
    kinds = {e.kind for e in pois}
    assert kinds == {"terminal", "key", "keyhole", "door"}
    assert scene.visit_order == ("terminal-1", "key-1", "keyhole-1", "door-1")
    # all POIs inside the room polygon
    room = Rect(Vec2(-6.0, -5.0), Vec2(6.3, 5.0))
    for e in pois:
        from navstick.geometry import shape_center

        c = shape_center(e.shape)
        assert room.min.x <= c.x <= room.max.x and room.min.y <= c.y <= room.max.y
    assert save_scene(gen_terraformers()) == save_scene(gen_terraformers())


TABLE3 = {
    1: (frozenset(), None),
    2: (frozenset({"movement"}), None),
    3: (frozenset({"time_pressure"}), 60.0),
    4: (frozenset({"occlusion"}), None),
    5: (frozenset({"movement", "time_pressure"}), 45.0),
    6: (frozenset({"movement", "occlusion"}), None),
    7: (frozenset({"time_pressure", "occlusion"}), 180.0),
    8: (frozenset({"movement", "time_pressure", "occlusion"}), 180.0),
}


@pytest.mark.parametrize("n", range(1, 9))
def test_segment_feature_flags(n):
    scene, spec = gen_segment(n)
    features, time_limit = TABLE3[n]
    assert spec.features == features
    assert spec.time_limit == time_limit
    assert spec.max_attempts == 3
    assert scene.segment == spec


def test_segment_entity_counts():
    s1, _ = gen_segment(1)
    assert sum(1 for o in s1.occluders if o.id.startswith("crate-")) == 5
    s3, spec3 = gen_segment(3)
    assert sum(1 for e in s3.entities if e.kind == "enemy_stationary") == 4
    assert spec3.objective.count == 4
    s7, _ = gen_segment(7)
    assert sum(1 for e in s7.entities if e.kind == "enemy_stationary") == 9
    s8, _ = gen_segment(8)
    roamers = [e for e in s8.entities if e.kind == "enemy_roaming"]
    assert len(roamers) == 7
    assert any(e.kind == "pressure_pad" for e in s8.entities)
    assert any(e.kind == "door" for e in s8.entities)


def test_segment_out_of_range():
    with pytest.raises(DocumentError):
        gen_segment(0)
    with pytest.raises(DocumentError):
        gen_segment(9)


def test_generators_validate_via_roundtrip():
    for n in range(1, 9):
        scene, _ = gen_segment(n)
        load_scene(save_scene(scene))


def test_duplicate_ids_rejected():
    with pytest.raises(DocumentError, match="duplicate"):
        scene = Scene(
            id="dup",
            spawn=PlayerPose(Vec2(0, 0), 0),
            entities=(
                Entity("x", "X", "item", Circle(Vec2(1, 1), 0.5)),
                Entity("x", "X2", "item", Circle(Vec2(2, 2), 0.5)),
            ),
            occluders=(),
        )
        save_scene(scene)


def test_occluder_must_block_something():
    with pytest.raises(DocumentError, match="block"):
        scene = Scene(
            id="o",
            spawn=PlayerPose(Vec2(0, 0), 0),
            entities=(),
            occluders=(Occluder("w", Circle(Vec2(1, 1), 0.5), False, False),),
        )
        save_scene(scene)
