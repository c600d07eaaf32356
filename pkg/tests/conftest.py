from __future__ import annotations

import random

import pytest

from navstick.geometry import Circle, Rect, Segment, Vec2, contains
from navstick.scene import Entity, Occluder, PlayerPose, Scene, validate_scene


def random_scene(seed: int, max_shapes: int = 12) -> tuple[Scene, PlayerPose]:
    """Seeded random scene for visibility property tests.

    The eye sits at the origin; shapes are kept out of a small clearance
    disc so the pose is never degenerate.
    """
    rng = random.Random(seed)
    n = rng.randint(1, max_shapes)
    entities: list[Entity] = []
    occluders: list[Occluder] = []

    def rand_point(lo: float = 2.0, hi: float = 18.0) -> Vec2:
        ang = rng.uniform(0.0, 360.0)
        dist = rng.uniform(lo, hi)
        import math

        r = math.radians(ang)
        return Vec2(dist * math.sin(r), dist * math.cos(r))

    for i in range(n):
        roll = rng.random()
        if roll < 0.5:
            c = rand_point()
            radius = rng.uniform(0.3, min(2.5, c.norm() - 0.5))
            shape = Circle(c, radius)
        elif roll < 0.8:
            c = rand_point(3.0, 16.0)
            hw, hh = rng.uniform(0.3, 2.0), rng.uniform(0.3, 2.0)
            shape = Rect(Vec2(c.x - hw, c.y - hh), Vec2(c.x + hw, c.y + hh))
            if contains(shape, Vec2(0.0, 0.0)):
                shape = Circle(c, 0.5)
        else:
            a = rand_point(3.0, 16.0)
            b = Vec2(a.x + rng.uniform(-4.0, 4.0), a.y + rng.uniform(-4.0, 4.0))
            if a == b:
                b = Vec2(a.x + 1.0, a.y)
            shape = Segment(a, b)
        kind_roll = rng.random()
        if kind_roll < 0.5:
            entities.append(Entity(f"target-{i}", f"Target {i}", "item", shape))
        elif kind_roll < 0.7:
            entities.append(Entity(f"prop-{i}", f"Prop {i}", "item", shape, is_poi=False))
        else:
            occluders.append(Occluder(f"block-{i}", shape, rng.random() < 0.5, True))
    pose = PlayerPose(Vec2(0.0, 0.0), rng.uniform(0.0, 360.0))
    scene = Scene(
        id=f"random-{seed}",
        spawn=pose,
        entities=tuple(entities),
        occluders=tuple(occluders),
    )
    validate_scene(scene)
    return scene, pose


@pytest.fixture
def aisle_scene():
    from navstick.scene import gen_aisle

    return gen_aisle(seed=0)
