"""World definition: geometry, entities, segment metadata, scene documents.

Scenes are immutable after load/generation. The document format is the
canonical structured-text dialect from `docs` (angles in degrees, lengths
in meters, prices as decimal strings); `save_scene(load_scene(d)) == d`
for any canonical document d.

Authored dimensions the source material never specifies are fixed,
documented constants below (aisle slot length, aisle width, arena sizes).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from decimal import Decimal, InvalidOperation
from typing import Any, Iterable, Optional

from .docs import DocumentError, dumps_canonical, get_field, loads, require
from .geometry import Circle, Rect, Segment, Shape, Vec2, norm_deg

ENTITY_KINDS = (
    "enemy_stationary",
    "enemy_roaming",
    "checkpoint",
    "pressure_pad",
    "door",
    "item",
    "terminal",
    "key",
    "keyhole",
)

OBJECTIVE_KINDS = ("reach_checkpoint", "defeat_then_checkpoint", "pressure_pad_gate", "traverse")
FEATURES = ("movement", "time_pressure", "occlusion")

# Aisle constants (dimensions are artifact choices, not sourced).
AISLE_SLOT_LENGTH = 2.0
AISLE_WIDTH = 3.0
AISLE_ITEM_DEPTH = 0.4

# Convention: a door entity named "<id>.blocker" in the occluder list is
# the door's movement blocker; the simulator deactivates both together
# when the gate opens.
GATE_BLOCKER_SUFFIX = ".blocker"

DEFAULT_CATALOG: tuple[tuple[str, str], ...] = (
    ("Apple Juice", "3.49"),
    ("Black Beans", "1.29"),
    ("Cereal", "4.99"),
    ("Dish Soap", "2.79"),
    ("Egg Noodles", "2.19"),
    ("Flour", "3.09"),
    ("Granola Bars", "5.49"),
    ("Honey", "6.99"),
    ("Instant Coffee", "7.89"),
    ("Jasmine Rice", "4.29"),
    ("Ketchup", "2.49"),
    ("Lemonade", "1.99"),
)


@dataclass(frozen=True)
class PlayerPose:
    position: Vec2
    heading: float  # degrees in [0, 360), clockwise from north

    def __post_init__(self):
        object.__setattr__(self, "heading", norm_deg(self.heading))


@dataclass(frozen=True)
class Patrol:
    a: Vec2
    b: Vec2
    speed: float  # m/s


@dataclass(frozen=True)
class Entity:
    id: str
    name: str
    kind: str
    shape: Shape
    price: Optional[str] = None
    patrol: Optional[Patrol] = None
    alive: bool = True
    is_poi: bool = True


@dataclass(frozen=True)
class Occluder:
    id: str
    shape: Shape
    blocks_movement: bool
    blocks_sight: bool


@dataclass(frozen=True)
class Objective:
    kind: str
    count: int = 0  # defeat requirement for defeat_then_checkpoint


@dataclass(frozen=True)
class SegmentSpec:
    scene_id: str
    objective: Objective
    time_limit: Optional[float] = None  # seconds
    max_attempts: int = 3
    features: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Scene:
    id: str
    spawn: PlayerPose
    entities: tuple[Entity, ...]
    occluders: tuple[Occluder, ...]
    segment: Optional[SegmentSpec] = None
    teleport_enabled: bool = False
    area: Optional[Rect] = None
    visit_order: tuple[str, ...] = ()

    def entity(self, entity_id: str) -> Entity:
        for e in self.entities:
            if e.id == entity_id:
                return e
        raise KeyError(entity_id)

    def occluder(self, occluder_id: str) -> Occluder:
        for o in self.occluders:
            if o.id == occluder_id:
                return o
        raise KeyError(occluder_id)

    def in_area(self, p: Vec2) -> bool:
        if self.area is None:
            return True
        return self.area.min.x <= p.x <= self.area.max.x and self.area.min.y <= p.y <= self.area.max.y


# --- validation ---------------------------------------------------------


def _check_shape(s: Shape, locus: str) -> None:
    if isinstance(s, Circle):
        require(s.center.is_finite(), "non-finite center", locus)
        require(s.radius > 0, "radius must be > 0", locus)
    elif isinstance(s, Rect):
        require(s.min.is_finite() and s.max.is_finite(), "non-finite corner", locus)
        require(s.min.x < s.max.x and s.min.y < s.max.y, "rect min must be < max componentwise", locus)
    elif isinstance(s, Segment):
        require(s.a.is_finite() and s.b.is_finite(), "non-finite endpoint", locus)
        require(s.a != s.b, "segment endpoints must be distinct", locus)
    else:
        raise DocumentError("unknown shape", locus)


def _check_price(price: str, locus: str) -> None:
    try:
        value = Decimal(price)
    except InvalidOperation:
        raise DocumentError(f"price '{price}' is not a decimal string", locus) from None
    require(value >= 0, "price must be non-negative", locus)


def validate_scene(scene: Scene) -> None:
    """Raise DocumentError naming the offending id on any invariant breach."""
    seen: set[str] = set()
    for e in scene.entities:
        locus = f"entity '{e.id}'"
        require(e.id not in seen, "duplicate id", locus)
        seen.add(e.id)
        require(e.kind in ENTITY_KINDS, f"unknown kind '{e.kind}'", locus)
        require(bool(e.name), "empty name", locus)
        _check_shape(e.shape, locus)
        if e.kind == "enemy_roaming":
            require(e.patrol is not None, "enemy_roaming requires a patrol", locus)
        if e.patrol is not None:
            require(e.patrol.a != e.patrol.b, "patrol endpoints must be distinct", locus)
            require(e.patrol.speed > 0, "patrol speed must be > 0", locus)
        if e.price is not None:
            require(e.kind == "item", "price on a non-item", locus)
            _check_price(e.price, locus)
    for o in scene.occluders:
        locus = f"occluder '{o.id}'"
        require(o.id not in seen, "duplicate id", locus)
        seen.add(o.id)
        _check_shape(o.shape, locus)
        require(o.blocks_movement or o.blocks_sight, "occluder must block movement or sight", locus)
    require(scene.spawn.position.is_finite(), "non-finite spawn", "player_spawn")
    if scene.area is not None:
        _check_shape(scene.area, "meta.area")
    for vid in scene.visit_order:
        require(vid in seen, f"visit_order references unknown id '{vid}'", "meta.visit_order")
    seg = scene.segment
    if seg is not None:
        locus = "segment"
        require(seg.objective.kind in OBJECTIVE_KINDS, f"unknown objective '{seg.objective.kind}'", locus)
        require(seg.max_attempts >= 1, "max_attempts must be >= 1", locus)
        require(all(f in FEATURES for f in seg.features), "unknown feature flag", locus)
        timed = "time_pressure" in seg.features
        require((seg.time_limit is not None) == timed, "time_limit present iff time_pressure feature", locus)
        if seg.time_limit is not None:
            require(seg.time_limit > 0, "time_limit must be > 0", locus)
        if seg.objective.kind == "defeat_then_checkpoint":
            require(seg.objective.count >= 1, "defeat objective needs count >= 1", locus)


# --- document I/O -------------------------------------------------------


def _vec_doc(v: Vec2) -> dict:
    return {"x": float(v.x), "y": float(v.y)}


def _vec_load(d: Any, locus: str) -> Vec2:
    require(isinstance(d, dict), "expected point object", locus)
    return Vec2(float(get_field(d, "x", locus)), float(get_field(d, "y", locus)))


def _shape_doc(s: Shape) -> dict:
    if isinstance(s, Circle):
        return {"kind": "circle", "center": _vec_doc(s.center), "radius": float(s.radius)}
    if isinstance(s, Rect):
        return {"kind": "rect", "min": _vec_doc(s.min), "max": _vec_doc(s.max)}
    return {"kind": "segment", "a": _vec_doc(s.a), "b": _vec_doc(s.b)}


def _shape_load(d: Any, locus: str) -> Shape:
    require(isinstance(d, dict), "expected shape object", locus)
    kind = get_field(d, "kind", locus)
    if kind == "circle":
        return Circle(_vec_load(get_field(d, "center", locus), locus), float(get_field(d, "radius", locus)))
    if kind == "rect":
        return Rect(_vec_load(get_field(d, "min", locus), locus), _vec_load(get_field(d, "max", locus), locus))
    if kind == "segment":
        return Segment(_vec_load(get_field(d, "a", locus), locus), _vec_load(get_field(d, "b", locus), locus))
    raise DocumentError(f"unknown shape kind '{kind}'", locus)


def scene_to_doc(scene: Scene) -> dict:
    entities = []
    for e in scene.entities:
        entities.append(
            {
                "alive": e.alive,
                "id": e.id,
                "is_poi": e.is_poi,
                "kind": e.kind,
                "name": e.name,
                "patrol": None
                if e.patrol is None
                else {"a": _vec_doc(e.patrol.a), "b": _vec_doc(e.patrol.b), "speed": float(e.patrol.speed)},
                "price": e.price,
                "shape": _shape_doc(e.shape),
            }
        )
    occluders = [
        {
            "blocks_movement": o.blocks_movement,
            "blocks_sight": o.blocks_sight,
            "id": o.id,
            "shape": _shape_doc(o.shape),
        }
        for o in scene.occluders
    ]
    seg = scene.segment
    return {
        "meta": {
            "area": None if scene.area is None else _shape_doc(scene.area),
            "id": scene.id,
            "teleport_enabled": scene.teleport_enabled,
            "visit_order": list(scene.visit_order),
        },
        "player_spawn": {"heading": float(scene.spawn.heading), "position": _vec_doc(scene.spawn.position)},
        "entities": entities,
        "occluders": occluders,
        "segment": None
        if seg is None
        else {
            "features": sorted(seg.features),
            "max_attempts": seg.max_attempts,
            "objective": {"count": seg.objective.count, "kind": seg.objective.kind},
            "scene_id": seg.scene_id,
            "time_limit": None if seg.time_limit is None else float(seg.time_limit),
        },
    }


def scene_from_doc(doc: Any) -> Scene:
    require(isinstance(doc, dict), "expected scene object", "document")
    meta = get_field(doc, "meta", "document")
    spawn_doc = get_field(doc, "player_spawn", "document")
    spawn = PlayerPose(
        _vec_load(get_field(spawn_doc, "position", "player_spawn"), "player_spawn"),
        float(get_field(spawn_doc, "heading", "player_spawn")),
    )
    entities = []
    for i, ed in enumerate(get_field(doc, "entities", "document")):
        locus = f"entities[{i}]"
        patrol_doc = ed.get("patrol")
        patrol = None
        if patrol_doc is not None:
            patrol = Patrol(
                _vec_load(get_field(patrol_doc, "a", locus), locus),
                _vec_load(get_field(patrol_doc, "b", locus), locus),
                float(get_field(patrol_doc, "speed", locus)),
            )
        entities.append(
            Entity(
                id=str(get_field(ed, "id", locus)),
                name=str(get_field(ed, "name", locus)),
                kind=str(get_field(ed, "kind", locus)),
                shape=_shape_load(get_field(ed, "shape", locus), locus),
                price=ed.get("price"),
                patrol=patrol,
                alive=bool(ed.get("alive", True)),
                is_poi=bool(ed.get("is_poi", True)),
            )
        )
    occluders = []
    for i, od in enumerate(get_field(doc, "occluders", "document")):
        locus = f"occluders[{i}]"
        occluders.append(
            Occluder(
                id=str(get_field(od, "id", locus)),
                shape=_shape_load(get_field(od, "shape", locus), locus),
                blocks_movement=bool(get_field(od, "blocks_movement", locus)),
                blocks_sight=bool(get_field(od, "blocks_sight", locus)),
            )
        )
    seg_doc = doc.get("segment")
    segment = None
    if seg_doc is not None:
        obj_doc = get_field(seg_doc, "objective", "segment")
        tl = seg_doc.get("time_limit")
        segment = SegmentSpec(
            scene_id=str(get_field(seg_doc, "scene_id", "segment")),
            objective=Objective(str(get_field(obj_doc, "kind", "segment.objective")), int(obj_doc.get("count", 0))),
            time_limit=None if tl is None else float(tl),
            max_attempts=int(seg_doc.get("max_attempts", 3)),
            features=frozenset(seg_doc.get("features", [])),
        )
    area_doc = meta.get("area")
    area = None
    if area_doc is not None:
        area = _shape_load(area_doc, "meta.area")
        require(isinstance(area, Rect), "area must be a rect", "meta.area")
    scene = Scene(
        id=str(get_field(meta, "id", "meta")),
        spawn=spawn,
        entities=tuple(entities),
        occluders=tuple(occluders),
        segment=segment,
        teleport_enabled=bool(meta.get("teleport_enabled", False)),
        area=area,
        visit_order=tuple(meta.get("visit_order", [])),
    )
    validate_scene(scene)
    return scene


def load_scene(text: str) -> Scene:
    return scene_from_doc(loads(text))


def save_scene(scene: Scene) -> str:
    validate_scene(scene)
    return dumps_canonical(scene_to_doc(scene))


# --- generators ---------------------------------------------------------


def gen_aisle(seed: int, catalog: Iterable[tuple[str, str]] = DEFAULT_CATALOG) -> Scene:
    """Grocery aisle: 8 item slots (4 per side, airtight) between 2 invisible walls.

    Item-to-slot assignment is a seed-deterministic shuffle of the catalog.
    """
    items = list(catalog)
    if len(items) < 8:
        raise DocumentError(f"catalog needs >= 8 entries, got {len(items)}")
    rng = random.Random(seed)
    rng.shuffle(items)
    picked = items[:8]

    half_w = AISLE_WIDTH / 2.0
    shelf_half = AISLE_SLOT_LENGTH * 2.0  # 4 slots per side
    entities = []
    slot = 0
    for side_x in (-half_w - AISLE_ITEM_DEPTH, half_w):  # west then east inner face
        for k in range(4):
            y0 = -shelf_half + k * AISLE_SLOT_LENGTH
            name, price = picked[slot]
            entities.append(
                Entity(
                    id=f"item-{slot + 1}",
                    name=name,
                    kind="item",
                    shape=Rect(Vec2(side_x, y0), Vec2(side_x + AISLE_ITEM_DEPTH, y0 + AISLE_SLOT_LENGTH)),
                    price=price,
                )
            )
            slot += 1
    occluders = [
        Occluder("wall-north", Rect(Vec2(-half_w, shelf_half), Vec2(half_w, shelf_half + 0.2)), True, False),
        Occluder("wall-south", Rect(Vec2(-half_w, -shelf_half - 0.2), Vec2(half_w, -shelf_half)), True, False),
    ]
    scene = Scene(
        id="aisle",
        spawn=PlayerPose(Vec2(0.0, 0.0), 0.0),
        entities=tuple(entities),
        occluders=tuple(occluders),
        area=Rect(Vec2(-half_w - 1.0, -shelf_half - 1.0), Vec2(half_w + 1.0, shelf_half + 1.0)),
    )
    validate_scene(scene)
    return scene


def gen_terraformers() -> Scene:
    """Single room with terminal, key, keyhole, and exit door, visited in order."""
    entities = (
        Entity("terminal-1", "Terminal", "terminal", Circle(Vec2(-4.5, 3.5), 0.4)),
        Entity("key-1", "Key", "key", Circle(Vec2(4.2, 3.8), 0.25)),
        Entity("keyhole-1", "Keyhole", "keyhole", Circle(Vec2(4.5, -3.8), 0.25)),
        Entity("door-1", "Door", "door", Rect(Vec2(6.0, -1.0), Vec2(6.3, 1.0))),
    )
    occluders = (
        Occluder("wall-west", Rect(Vec2(-6.3, -5.3), Vec2(-6.0, 5.3)), True, True),
        Occluder("wall-east-south", Rect(Vec2(6.0, -5.3), Vec2(6.3, -1.0)), True, True),
        Occluder("wall-east-north", Rect(Vec2(6.0, 1.0), Vec2(6.3, 5.3)), True, True),
        Occluder("wall-north", Rect(Vec2(-6.3, 5.0), Vec2(6.3, 5.3)), True, True),
        Occluder("wall-south", Rect(Vec2(-6.3, -5.3), Vec2(6.3, -5.0)), True, True),
    )
    scene = Scene(
        id="terraformers",
        spawn=PlayerPose(Vec2(-4.0, -3.5), 0.0),
        entities=entities,
        occluders=occluders,
        teleport_enabled=True,
        area=Rect(Vec2(-6.3, -5.3), Vec2(6.3, 5.3)),
        visit_order=("terminal-1", "key-1", "keyhole-1", "door-1"),
    )
    validate_scene(scene)
    return scene


def _chomper(n: int, pos: Vec2, patrol: Optional[Patrol] = None) -> Entity:
    return Entity(
        id=f"chomper-{n}",
        name=f"Chomper {n}",
        kind="enemy_roaming" if patrol else "enemy_stationary",
        shape=Circle(pos, 0.5),
        patrol=patrol,
    )


def _checkpoint(pos: Vec2, hidden: bool) -> Entity:
    return Entity("cp-1", "Checkpoint", "checkpoint", Circle(pos, 0.5), alive=not hidden)


def _pad(pos: Vec2) -> Entity:
    return Entity("pad-1", "Pressure Pad", "pressure_pad", Circle(pos, 0.7))


def _gate(x0: float, x1: float, y0: float, y1: float) -> tuple[Entity, Occluder]:
    shape = Rect(Vec2(x0, y0), Vec2(x1, y1))
    return (
        Entity("gate-1", "Gate", "door", shape),
        Occluder("gate-1" + GATE_BLOCKER_SUFFIX, shape, True, False),
    )


def _tree(n: int, pos: Vec2) -> Occluder:
    return Occluder(f"tree-{n}", Circle(pos, 0.8), True, True)


def _arena_walls(x0: float, y0: float, x1: float, y1: float) -> tuple[Occluder, ...]:
    t = 0.5
    return (
        Occluder("arena-west", Rect(Vec2(x0 - t, y0 - t), Vec2(x0, y1 + t)), True, True),
        Occluder("arena-east", Rect(Vec2(x1, y0 - t), Vec2(x1 + t, y1 + t)), True, True),
        Occluder("arena-south", Rect(Vec2(x0, y0 - t), Vec2(x1, y0)), True, True),
        Occluder("arena-north", Rect(Vec2(x0, y1), Vec2(x1, y1 + t)), True, True),
    )


def _segment_spec(n: int, objective: Objective, features: frozenset[str], time_limit: Optional[float]) -> SegmentSpec:
    return SegmentSpec(
        scene_id=f"explorer-seg-{n}",
        objective=objective,
        time_limit=time_limit,
        max_attempts=3,
        features=features,
    )


def gen_segment(n: int) -> tuple[Scene, SegmentSpec]:
    """Adventure-game segment n in [1, 8]; feature flags and entity counts
    follow the eight movement/time-pressure/occlusion combinations."""
    if not 1 <= n <= 8:
        raise DocumentError(f"segment index {n} out of range [1, 8]")
    entities: list[Entity] = []
    occluders: list[Occluder] = list(_arena_walls(-12, -2, 12, 22))
    spawn = PlayerPose(Vec2(0.0, 0.0), 0.0)

    if n == 1:
        features: frozenset[str] = frozenset()
        time_limit = None
        objective = Objective("reach_checkpoint")
        entities.append(_checkpoint(Vec2(0.0, 14.0), hidden=False))
        for i in range(5):
            cx = -2.4 + 1.2 * i
            occluders.append(Occluder(f"crate-{i + 1}", Rect(Vec2(cx - 0.6, 6.4), Vec2(cx + 0.6, 7.6)), True, True))
    elif n == 2:
        features = frozenset({"movement"})
        time_limit = None
        objective = Objective("defeat_then_checkpoint", 1)
        entities.append(_chomper(1, Vec2(-4.0, 8.0), Patrol(Vec2(-4.0, 8.0), Vec2(4.0, 8.0), 1.5)))
        entities.append(_checkpoint(Vec2(0.0, 14.0), hidden=True))
    elif n == 3:
        features = frozenset({"time_pressure"})
        time_limit = 60.0
        objective = Objective("defeat_then_checkpoint", 4)
        for i, x in enumerate((-6.0, -2.0, 2.0, 6.0)):
            entities.append(_chomper(i + 1, Vec2(x, 6.0)))
        entities.append(_checkpoint(Vec2(0.0, 12.0), hidden=True))
    elif n == 4:
        features = frozenset({"occlusion"})
        time_limit = None
        objective = Objective("pressure_pad_gate")
        entities.append(_pad(Vec2(5.0, 8.0)))
        gate, blocker = _gate(-2.0, 2.0, 14.0, 14.6)
        entities.append(gate)
        occluders.append(blocker)
        occluders.append(Occluder("gate-wall-west", Rect(Vec2(-12.0, 14.0), Vec2(-2.0, 14.6)), True, True))
        occluders.append(Occluder("gate-wall-east", Rect(Vec2(2.0, 14.0), Vec2(12.0, 14.6)), True, True))
        entities.append(_checkpoint(Vec2(0.0, 18.0), hidden=True))
        for i, p in enumerate((Vec2(1.2, 5.5), Vec2(-3.5, 6.0), Vec2(7.0, 4.0))):
            occluders.append(_tree(i + 1, p))
    elif n == 5:
        features = frozenset({"movement", "time_pressure"})
        time_limit = 45.0
        objective = Objective("defeat_then_checkpoint", 1)
        entities.append(_chomper(1, Vec2(-5.0, 9.0), Patrol(Vec2(-5.0, 9.0), Vec2(5.0, 9.0), 2.0)))
        entities.append(_checkpoint(Vec2(0.0, 15.0), hidden=True))
    elif n == 6:
        features = frozenset({"movement", "occlusion"})
        time_limit = None
        objective = Objective("traverse")
        speeds = (1.2, 1.5, 1.8, 2.1)
        for i in range(4):
            y = 4.0 + 4.0 * i
            a, b = Vec2(-6.0, y), Vec2(6.0, y)
            start = a if i % 2 == 0 else b
            entities.append(_chomper(i + 1, start, Patrol(a, b, speeds[i])))
        for i, p in enumerate((Vec2(-4.0, 5.0), Vec2(3.0, 7.0), Vec2(-2.5, 12.0), Vec2(4.0, 14.0))):
            occluders.append(_tree(i + 1, p))
        entities.append(_checkpoint(Vec2(0.0, 18.0), hidden=False))
    elif n == 7:
        features = frozenset({"time_pressure", "occlusion"})
        time_limit = 180.0
        objective = Objective("traverse")
        spots = (
            Vec2(-6.0, 5.0), Vec2(-2.0, 6.0), Vec2(4.0, 5.0),
            Vec2(-5.0, 9.0), Vec2(2.0, 10.0), Vec2(6.0, 9.0),
            Vec2(-4.0, 14.0), Vec2(3.0, 15.0), Vec2(6.0, 13.0),
        )
        for i, p in enumerate(spots):
            entities.append(_chomper(i + 1, p))
        for i, p in enumerate((Vec2(-3.0, 11.0), Vec2(5.0, 7.0), Vec2(2.5, 12.5))):
            occluders.append(_tree(i + 1, p))
        entities.append(_checkpoint(Vec2(0.0, 19.0), hidden=False))
    else:  # n == 8
        features = frozenset({"movement", "time_pressure", "occlusion"})
        time_limit = 180.0
        objective = Objective("pressure_pad_gate")
        occluders = list(_arena_walls(-2, -8, 28, 8))
        spawn = PlayerPose(Vec2(0.0, 0.0), 90.0)
        speeds = (1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4)
        for i, x in enumerate((4.0, 6.5, 9.0, 11.5, 14.0, 16.5, 19.0)):
            a, b = Vec2(x, -4.0), Vec2(x, 4.0)
            start = a if i % 2 == 0 else b
            entities.append(_chomper(i + 1, start, Patrol(a, b, speeds[i])))
        entities.append(_pad(Vec2(22.0, -5.0)))
        gate, blocker = _gate(24.0, 24.6, -2.0, 2.0)
        entities.append(gate)
        occluders.append(blocker)
        occluders.append(Occluder("gate-wall-south", Rect(Vec2(24.0, -8.0), Vec2(24.6, -2.0)), True, True))
        occluders.append(Occluder("gate-wall-north", Rect(Vec2(24.0, 2.0), Vec2(24.6, 8.0)), True, True))
        entities.append(_checkpoint(Vec2(26.5, 0.0), hidden=True))
        for i, p in enumerate((Vec2(8.0, 6.0), Vec2(12.0, -6.0), Vec2(18.0, 5.0))):
            occluders.append(_tree(i + 1, p))

    spec = _segment_spec(n, objective, features, time_limit)
    area = Rect(Vec2(-2.5, -8.5), Vec2(28.5, 8.5)) if n == 8 else Rect(Vec2(-12.5, -2.5), Vec2(12.5, 22.5))
    scene = Scene(
        id=f"explorer-seg-{n}",
        spawn=spawn,
        entities=tuple(entities),
        occluders=tuple(occluders),
        segment=spec,
        area=area,
    )
    validate_scene(scene)
    return scene, spec


def gen_trial(n: int) -> Scene:
    """Tutorial levels: 1 = pad/gate/checkpoint, 2 = stationary enemy, 3 = roamer."""
    if not 1 <= n <= 3:
        raise DocumentError(f"trial index {n} out of range [1, 3]")
    entities: list[Entity] = []
    occluders: list[Occluder] = list(_arena_walls(-8, -2, 8, 18))
    if n == 1:
        objective = Objective("pressure_pad_gate")
        entities.append(_pad(Vec2(0.0, 6.0)))
        gate, blocker = _gate(-2.0, 2.0, 10.0, 10.6)
        entities.append(gate)
        occluders.append(blocker)
        occluders.append(Occluder("gate-wall-west", Rect(Vec2(-8.0, 10.0), Vec2(-2.0, 10.6)), True, True))
        occluders.append(Occluder("gate-wall-east", Rect(Vec2(2.0, 10.0), Vec2(8.0, 10.6)), True, True))
        entities.append(_checkpoint(Vec2(0.0, 14.0), hidden=True))
    elif n == 2:
        objective = Objective("defeat_then_checkpoint", 1)
        entities.append(_chomper(1, Vec2(0.0, 8.0)))
        entities.append(_checkpoint(Vec2(0.0, 14.0), hidden=True))
    else:
        objective = Objective("defeat_then_checkpoint", 1)
        entities.append(_chomper(1, Vec2(-4.0, 8.0), Patrol(Vec2(-4.0, 8.0), Vec2(4.0, 8.0), 1.5)))
        entities.append(_checkpoint(Vec2(0.0, 14.0), hidden=True))
    scene = Scene(
        id=f"trial-{n}",
        spawn=PlayerPose(Vec2(0.0, 0.0), 0.0),
        entities=tuple(entities),
        occluders=tuple(occluders),
        segment=SegmentSpec(scene_id=f"trial-{n}", objective=objective),
        area=Rect(Vec2(-8.5, -2.5), Vec2(8.5, 18.5)),
    )
    validate_scene(scene)
    return scene


def with_entity(scene: Scene, entity: Entity) -> Scene:
    """Copy of the scene with one entity replaced (same id)."""
    ents = tuple(entity if e.id == entity.id else e for e in scene.entities)
    return replace(scene, entities=ents)
