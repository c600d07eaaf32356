"""Planar geometry: vectors, shapes, ray intersection, distances.

The world is a flat 2D plane measured in meters. x grows east, y grows
north. World angles are degrees clockwise from north, so angle 0 points
+y and angle 90 points +x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EPS = 1e-12
RAY_EPS = 1e-9  # minimum hit distance; hits closer than this are ignored


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


@dataclass(frozen=True)
class Circle:
    center: Vec2
    radius: float


@dataclass(frozen=True)
class Rect:
    min: Vec2
    max: Vec2


@dataclass(frozen=True)
class Segment:
    a: Vec2
    b: Vec2


Shape = Circle | Rect | Segment


def norm_deg(a: float) -> float:
    """Normalize an angle to [0, 360)."""
    a = math.fmod(a, 360.0)
    return a + 360.0 if a < 0.0 else a


def heading_vec(world_deg: float) -> Vec2:
    """Unit vector for a world angle (clockwise from north)."""
    r = math.radians(world_deg)
    return Vec2(math.sin(r), math.cos(r))


def world_angle(v: Vec2) -> float:
    """World angle of a direction vector, degrees clockwise from north."""
    return norm_deg(math.degrees(math.atan2(v.x, v.y)))


def shape_center(s: Shape) -> Vec2:
    if isinstance(s, Circle):
        return s.center
    if isinstance(s, Rect):
        return Vec2((s.min.x + s.max.x) / 2.0, (s.min.y + s.max.y) / 2.0)
    return Vec2((s.a.x + s.b.x) / 2.0, (s.a.y + s.b.y) / 2.0)


def shape_scaled(s: Shape, factor: float) -> Shape:
    """Scale a shape by `factor` about its own center."""
    c = shape_center(s)
    if isinstance(s, Circle):
        return Circle(c, s.radius * factor)
    if isinstance(s, Rect):
        half = Vec2((s.max.x - s.min.x) / 2.0 * factor, (s.max.y - s.min.y) / 2.0 * factor)
        return Rect(c - half, c + half)
    return Segment(c + (s.a - c).scaled(factor), c + (s.b - c).scaled(factor))


def contains(s: Shape, p: Vec2) -> bool:
    """Strict interior test. Segments have no interior."""
    if isinstance(s, Circle):
        return p.dist(s.center) < s.radius
    if isinstance(s, Rect):
        return s.min.x < p.x < s.max.x and s.min.y < p.y < s.max.y
    return False


def shape_distance(a: Shape, b: Shape) -> float:
    """Edge-to-edge Euclidean distance; 0 when the shapes touch or overlap.

    Only the rect/rect and circle/circle cases see production use (aisle
    items are rects); the remaining pairs go through a coarse fallback on
    centers minus extents and are good enough for diagnostics.
    """
    if isinstance(a, Rect) and isinstance(b, Rect):
        dx = max(a.min.x - b.max.x, b.min.x - a.max.x, 0.0)
        dy = max(a.min.y - b.max.y, b.min.y - a.max.y, 0.0)
        return math.hypot(dx, dy)
    if isinstance(a, Circle) and isinstance(b, Circle):
        return max(0.0, a.center.dist(b.center) - a.radius - b.radius)
    if isinstance(a, Circle) and isinstance(b, Rect):
        dx = max(b.min.x - a.center.x, a.center.x - b.max.x, 0.0)
        dy = max(b.min.y - a.center.y, a.center.y - b.max.y, 0.0)
        return max(0.0, math.hypot(dx, dy) - a.radius)
    if isinstance(a, Rect) and isinstance(b, Circle):
        return shape_distance(b, a)
    ca, cb = shape_center(a), shape_center(b)
    return max(0.0, ca.dist(cb) - _extent(a) - _extent(b))


def _extent(s: Shape) -> float:
    c = shape_center(s)
    if isinstance(s, Circle):
        return s.radius
    if isinstance(s, Rect):
        return c.dist(s.max)
    return c.dist(s.a)


def point_shape_distance(p: Vec2, s: Shape) -> float:
    """Distance from a point to a shape's boundary/area (0 inside)."""
    if isinstance(s, Circle):
        return max(0.0, p.dist(s.center) - s.radius)
    if isinstance(s, Rect):
        dx = max(s.min.x - p.x, p.x - s.max.x, 0.0)
        dy = max(s.min.y - p.y, p.y - s.max.y, 0.0)
        return math.hypot(dx, dy)
    e = s.b - s.a
    ee = e.x * e.x + e.y * e.y
    if ee < EPS:
        return p.dist(s.a)
    t = max(0.0, min(1.0, ((p.x - s.a.x) * e.x + (p.y - s.a.y) * e.y) / ee))
    return p.dist(s.a + e.scaled(t))


def ray_hit(origin: Vec2, direction: Vec2, s: Shape) -> float:
    """First positive hit distance of a ray against a shape, or inf.

    Rays that start inside a circle or rect ignore that shape entirely
    (the sweep's walk-over rule); see the batch version for the same
    convention.
    """
    if isinstance(s, Circle):
        ox, oy = origin.x - s.center.x, origin.y - s.center.y
        c0 = ox * ox + oy * oy - s.radius * s.radius
        if c0 < 0.0:
            return math.inf  # origin inside
        b = ox * direction.x + oy * direction.y
        disc = b * b - c0
        if disc < 0.0:
            return math.inf
        t = -b - math.sqrt(disc)
        return t if t > RAY_EPS else math.inf
    if isinstance(s, Rect):
        t_enter, t_exit = -math.inf, math.inf
        for o, d, lo, hi in (
            (origin.x, direction.x, s.min.x, s.max.x),
            (origin.y, direction.y, s.min.y, s.max.y),
        ):
            if abs(d) < EPS:
                if o <= lo or o >= hi:
                    return math.inf
            else:
                t1, t2 = (lo - o) / d, (hi - o) / d
                if t1 > t2:
                    t1, t2 = t2, t1
                t_enter = max(t_enter, t1)
                t_exit = min(t_exit, t2)
        if t_enter > t_exit or t_exit <= RAY_EPS:
            return math.inf
        if t_enter <= RAY_EPS:
            return math.inf  # origin inside (or on the boundary)
        return t_enter
    e = s.b - s.a
    denom = direction.x * e.y - direction.y * e.x
    if abs(denom) < EPS:
        return math.inf
    ox, oy = s.a.x - origin.x, s.a.y - origin.y
    t = (ox * e.y - oy * e.x) / denom
    u = (ox * direction.y - oy * direction.x) / denom
    if t > RAY_EPS and 0.0 <= u <= 1.0:
        return t
    return math.inf


def ray_hit_batch(origin: Vec2, world_deg: np.ndarray, s: Shape) -> np.ndarray:
    """Vectorized `ray_hit` over an array of world angles (degrees)."""
    r = np.radians(world_deg)
    dx, dy = np.sin(r), np.cos(r)
    out = np.full(world_deg.shape, np.inf)
    if isinstance(s, Circle):
        ox, oy = origin.x - s.center.x, origin.y - s.center.y
        c0 = ox * ox + oy * oy - s.radius * s.radius
        if c0 < 0.0:
            return out
        b = ox * dx + oy * dy
        disc = b * b - c0
        ok = disc >= 0.0
        t = np.where(ok, -b - np.sqrt(np.where(ok, disc, 0.0)), np.inf)
        return np.where(ok & (t > RAY_EPS), t, np.inf)
    if isinstance(s, Rect):
        t_enter = np.full(world_deg.shape, -np.inf)
        t_exit = np.full(world_deg.shape, np.inf)
        alive = np.ones(world_deg.shape, dtype=bool)
        for o, d, lo, hi in ((origin.x, dx, s.min.x, s.max.x), (origin.y, dy, s.min.y, s.max.y)):
            par = np.abs(d) < EPS
            alive &= ~(par & ((o <= lo) | (o >= hi)))
            with np.errstate(divide="ignore", invalid="ignore"):
                t1 = (lo - o) / d
                t2 = (hi - o) / d
            swap = t1 > t2
            t1s = np.where(swap, t2, t1)
            t2s = np.where(swap, t1, t2)
            t_enter = np.where(par, t_enter, np.maximum(t_enter, t1s))
            t_exit = np.where(par, t_exit, np.minimum(t_exit, t2s))
        ok = alive & (t_enter <= t_exit) & (t_enter > RAY_EPS)
        return np.where(ok, t_enter, np.inf)
    e = s.b - s.a
    denom = dx * e.y - dy * e.x
    ox, oy = s.a.x - origin.x, s.a.y - origin.y
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (ox * e.y - oy * e.x) / denom
        u = (ox * dy - oy * dx) / denom
    ok = (np.abs(denom) >= EPS) & (t > RAY_EPS) & (u >= 0.0) & (u <= 1.0)
    return np.where(ok, t, np.inf)
