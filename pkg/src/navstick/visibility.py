"""First-hit line-of-sight: single raycasts and the full 360° partition.

Bearings are degrees clockwise from the player's forward direction
(12 o'clock = 0°, one o'clock = 30°). The partition is computed by an
exact sweep: closed-form silhouette angles (circle tangents, rect
corners, segment endpoints) seed the boundary set, a dense scan finds
the nearest-shape changeovers between them, and each detected change is
refined by bisection to BOUNDARY_TOL degrees. `oracle_navpie` is the
independent dense-raycast check used by the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import (
    Circle,
    Rect,
    Shape,
    Vec2,
    contains,
    heading_vec,
    norm_deg,
    ray_hit,
    ray_hit_batch,
    world_angle,
)
from .scene import PlayerPose, Scene

BOUNDARY_TOL = 1e-9  # degrees; slice boundaries resolved to this
SCAN_STEP = 0.05  # degrees; dense-scan resolution between silhouette angles
SNAP_TOL = 1e-7  # refined boundaries this close to a closed-form angle snap to it
MIN_EXTENT = 1e-9  # slices thinner than this are dropped (tangent contacts)

NOTHING: tuple[str, Optional[str]] = ("nothing", None)


class DegeneratePoseError(ValueError):
    """Raised when the eye sits inside a sight-blocking occluder."""


@dataclass(frozen=True)
class RayHit:
    kind: str  # "poi" | "obstruction" | "nothing"
    target: Optional[str] = None
    distance: Optional[float] = None
    point: Optional[Vec2] = None

    @property
    def label(self) -> tuple[str, Optional[str]]:
        return (self.kind, self.target)


@dataclass(frozen=True)
class Slice:
    start: float
    end: float  # end < start means the slice wraps through north
    label: tuple[str, Optional[str]]

    @property
    def extent(self) -> float:
        if self.end > self.start:
            return self.end - self.start
        return self.end - self.start + 360.0

    def contains(self, bearing: float) -> bool:
        b = norm_deg(bearing)
        if self.start == 0.0 and self.end == 360.0:
            return True
        if self.start < self.end:
            return self.start <= b < self.end
        return b >= self.start or b < self.end


@dataclass(frozen=True)
class NavPie:
    slices: tuple[Slice, ...]
    frame: PlayerPose

    def slice_at(self, bearing: float) -> Slice:
        for s in self.slices:
            if s.contains(bearing):
                return s
        raise AssertionError(f"no slice contains bearing {bearing}")

    @property
    def boundaries(self) -> list[float]:
        return [s.start for s in self.slices]


def slice_at(pie: NavPie, bearing: float) -> Slice:
    """The unique slice containing a bearing (half-open [start, end))."""
    return pie.slice_at(bearing)


@dataclass(frozen=True)
class _Body:
    label: tuple[str, Optional[str]]
    shape: Shape


def _sight_bodies(scene: Scene, eye: Vec2) -> list[_Body]:
    bodies: list[tuple[str, _Body]] = []
    for e in scene.entities:
        if not e.alive:
            continue
        if contains(e.shape, eye):
            # walk-over POIs (pads, checkpoints) never occlude from within
            continue
        kind = "poi" if e.is_poi else "obstruction"
        bodies.append((e.id, _Body((kind, e.id), e.shape)))
    for o in scene.occluders:
        if not o.blocks_sight:
            continue
        if contains(o.shape, eye):
            raise DegeneratePoseError(f"player inside sight-blocking occluder '{o.id}'")
        bodies.append((o.id, _Body(("obstruction", o.id), o.shape)))
    bodies.sort(key=lambda pair: pair[0])  # ties along a ray break by id
    return [b for _, b in bodies]


def _batch_hits(bodies: list[_Body], pose: PlayerPose, bearings: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(body index or -1, hit distance) for each bearing."""
    world = np.mod(pose.heading + bearings, 360.0)
    if not bodies:
        return np.full(bearings.shape, -1, dtype=np.int64), np.full(bearings.shape, np.inf)
    ts = np.stack([ray_hit_batch(pose.position, world, b.shape) for b in bodies])
    idx = np.argmin(ts, axis=0)
    tmin = ts[idx, np.arange(bearings.shape[0])]
    idx = np.where(np.isinf(tmin), -1, idx)
    return idx, tmin


def cast_ray(scene: Scene, pose: PlayerPose, bearing: float) -> RayHit:
    """Nearest first hit along a bearing; infinite range; transparent
    occluders (invisible walls) and dead entities are ignored."""
    bodies = _sight_bodies(scene, pose.position)
    direction = heading_vec(pose.heading + bearing)
    best_t = math.inf
    best: Optional[_Body] = None
    for b in bodies:
        t = ray_hit(pose.position, direction, b.shape)
        if t < best_t:
            best_t = t
            best = b
    if best is None:
        return RayHit("nothing")
    point = pose.position + direction.scaled(best_t)
    return RayHit(best.label[0], best.label[1], best_t, point)


def _candidate_bearings(bodies: list[_Body], pose: PlayerPose) -> list[float]:
    eye = pose.position
    cands: list[float] = []

    def add(world_deg: float) -> None:
        cands.append(norm_deg(world_deg - pose.heading))

    for b in bodies:
        s = b.shape
        if isinstance(s, Circle):
            d = eye.dist(s.center)
            if d <= s.radius:
                continue
            theta = world_angle(s.center - eye)
            alpha = math.degrees(math.asin(s.radius / d))
            add(theta - alpha)
            add(theta + alpha)
        elif isinstance(s, Rect):
            for corner in (
                Vec2(s.min.x, s.min.y),
                Vec2(s.min.x, s.max.y),
                Vec2(s.max.x, s.min.y),
                Vec2(s.max.x, s.max.y),
            ):
                add(world_angle(corner - eye))
        else:
            add(world_angle(s.a - eye))
            add(world_angle(s.b - eye))
    cands.sort()
    dedup: list[float] = []
    for c in cands:
        if not dedup or c - dedup[-1] > 1e-12:
            dedup.append(c)
    if dedup and dedup[0] + 360.0 - dedup[-1] <= 1e-12:
        dedup.pop()
    return dedup


def _refine_boundaries(
    bodies: list[_Body],
    pose: PlayerPose,
    samples: np.ndarray,
    labels: np.ndarray,
) -> list[tuple[float, int, int]]:
    """Bisect every label change between consecutive samples (circularly).

    Sample angles are in an unwrapped, increasing domain. Returns
    (boundary angle, label before, label after). A probe that lands on a
    third label splits the gap, so sub-step slivers straddled by a probe
    are recovered as well.
    """
    n = samples.shape[0]
    lo: list[float] = []
    hi: list[float] = []
    llo: list[int] = []
    lhi: list[int] = []
    for i in range(n):
        j = (i + 1) % n
        if labels[i] != labels[j]:
            a = float(samples[i])
            b = float(samples[j]) if j > 0 else float(samples[0]) + 360.0
            lo.append(a)
            hi.append(b)
            llo.append(int(labels[i]))
            lhi.append(int(labels[j]))
    if not lo:
        return []
    alo = np.array(lo)
    ahi = np.array(hi)
    allo = np.array(llo, dtype=np.int64)
    alhi = np.array(lhi, dtype=np.int64)
    while True:
        gap = ahi - alo
        active = gap > BOUNDARY_TOL
        if not active.any():
            break
        mid = (alo + ahi) / 2.0
        mlab, _ = _batch_hits(bodies, pose, np.mod(mid[active], 360.0))
        mids = mid[active]
        idxs = np.nonzero(active)[0]
        split_lo, split_hi, split_llo, split_lhi = [], [], [], []
        for k, i in enumerate(idxs):
            m = int(mlab[k])
            if m == allo[i]:
                alo[i] = mids[k]
            elif m == alhi[i]:
                ahi[i] = mids[k]
            else:
                split_lo.append(mids[k])
                split_hi.append(ahi[i])
                split_llo.append(m)
                split_lhi.append(alhi[i])
                ahi[i] = mids[k]
                alhi[i] = m
        if split_lo:
            alo = np.concatenate([alo, np.array(split_lo)])
            ahi = np.concatenate([ahi, np.array(split_hi)])
            allo = np.concatenate([allo, np.array(split_llo, dtype=np.int64)])
            alhi = np.concatenate([alhi, np.array(split_lhi, dtype=np.int64)])
    out = [((float(alo[i]) + float(ahi[i])) / 2.0, int(allo[i]), int(alhi[i])) for i in range(alo.shape[0])]
    out.sort()
    return out


def compute_navpie(scene: Scene, pose: PlayerPose) -> NavPie:
    """Exact partition of the bearing circle by first-hit label."""
    bodies = _sight_bodies(scene, pose.position)
    if not bodies:
        return NavPie((Slice(0.0, 360.0, NOTHING),), pose)

    cands = _candidate_bearings(bodies, pose)
    if not cands:
        cands = [0.0]

    # interior samples per arc, in an unwrapped increasing domain
    sample_list: list[float] = []
    m = len(cands)
    for i in range(m):
        a = cands[i]
        b = cands[i + 1] if i + 1 < m else cands[0] + 360.0
        span = b - a
        if span <= 1e-12:
            continue
        k = max(1, math.ceil(span / SCAN_STEP))
        for j in range(k):
            sample_list.append(a + span * (j + 0.5) / k)
    samples = np.array(sample_list)
    labels, _ = _batch_hits(bodies, pose, np.mod(samples, 360.0))

    raw = _refine_boundaries(bodies, pose, samples, labels)
    if not raw:
        body = bodies[int(labels[0])] if int(labels[0]) >= 0 else None
        return NavPie((Slice(0.0, 360.0, body.label if body else NOTHING),), pose)

    def snap(angle: float) -> float:
        a = norm_deg(angle)
        for c in cands:
            if abs(a - c) <= SNAP_TOL or abs(a - c - 360.0) <= SNAP_TOL or abs(a - c + 360.0) <= SNAP_TOL:
                return c
        return a

    def label_of(idx: int) -> tuple[str, Optional[str]]:
        return bodies[idx].label if idx >= 0 else NOTHING

    # build circular runs between consecutive boundaries
    bounds = [(snap(angle), label_of(after)) for angle, _, after in raw]
    bounds.sort(key=lambda t: t[0])
    runs: list[list] = []
    for i in range(len(bounds)):
        start, lab = bounds[i]
        end = bounds[(i + 1) % len(bounds)][0]
        runs.append([start, end, lab])

    # drop zero-extent contacts (tangent rays, edge-on corner grazes);
    # their arc is absorbed when the surviving runs are re-stitched
    # end-to-start below
    def extent(r: list) -> float:
        s, e, _ = r
        if e == s:
            return 0.0  # two boundaries snapped to one angle
        return e - s if e > s else e - s + 360.0

    kept = [r for r in runs if extent(r) >= MIN_EXTENT]
    if not kept:
        body = bodies[int(labels[0])] if int(labels[0]) >= 0 else None
        return NavPie((Slice(0.0, 360.0, body.label if body else NOTHING),), pose)
    for i in range(len(kept)):
        kept[i][1] = kept[(i + 1) % len(kept)][0]
    merged: list[list] = []
    for s, e, lab in kept:
        if merged and merged[-1][2] == lab:
            merged[-1][1] = e
        else:
            merged.append([s, e, lab])
    if len(merged) > 1 and merged[0][2] == merged[-1][2]:
        merged[0][0] = merged[-1][0]
        merged.pop()
    if len(merged) == 1:
        return NavPie((Slice(0.0, 360.0, merged[0][2]),), pose)
    slices = tuple(Slice(norm_deg(s), norm_deg(e), lab) for s, e, lab in merged)
    slices = tuple(sorted(slices, key=lambda s: s.start))
    return NavPie(slices, pose)


def label_text(label: tuple[str, Optional[str]]) -> str:
    kind, target = label
    return kind if target is None else f"{kind}:{target}"


def label_from_text(text: str) -> tuple[str, Optional[str]]:
    if ":" in text:
        kind, target = text.split(":", 1)
        return (kind, target)
    return (text, None)


def load_pie_fixture(text: str):
    """Fixture document: a scene plus its expected slice table.

    Keys: `scene` (scene document), optional `pose` {position, heading}
    (defaults to the spawn), `navpie_expected` rows with start/end/label,
    optional `tolerance` in degrees (default 1e-6).
    """
    from .docs import get_field, loads
    from .scene import scene_from_doc

    doc = loads(text)
    scene = scene_from_doc(get_field(doc, "scene", "fixture"))
    pose_doc = doc.get("pose")
    if pose_doc is None:
        pose = scene.spawn
    else:
        pos = pose_doc["position"]
        pose = PlayerPose(Vec2(float(pos["x"]), float(pos["y"])), float(pose_doc["heading"]))
    expected = tuple(
        Slice(float(r["start"]), float(r["end"]), label_from_text(str(r["label"])))
        for r in get_field(doc, "navpie_expected", "fixture")
    )
    return scene, pose, expected, float(doc.get("tolerance", 1e-6))


def verify_pie_fixture(text: str) -> list[str]:
    """Check compute_navpie against a fixture table; returns mismatches."""
    scene, pose, expected, tol = load_pie_fixture(text)
    pie = compute_navpie(scene, pose)
    problems: list[str] = []
    if len(pie.slices) != len(expected):
        problems.append(f"slice count {len(pie.slices)} != expected {len(expected)}")
    for got, want in zip(pie.slices, expected):
        if got.label != want.label:
            problems.append(f"label {label_text(got.label)} != {label_text(want.label)} at {got.start:.4f}")
        if abs(got.start - want.start) > tol or abs(got.end - want.end) > tol:
            problems.append(
                f"bounds ({got.start:.9f}, {got.end:.9f}) != ({want.start:.9f}, {want.end:.9f}) "
                f"for {label_text(want.label)}"
            )
    return problems


def oracle_navpie(scene: Scene, pose: PlayerPose, n_rays: int) -> NavPie:
    """Partition built by dense uniform sampling; the verification oracle."""
    if n_rays < 360:
        raise ValueError("n_rays must be >= 360")
    bodies = _sight_bodies(scene, pose.position)
    bearings = np.arange(n_rays) * (360.0 / n_rays)
    labels, _ = _batch_hits(bodies, pose, bearings)

    def label_of(idx: int) -> tuple[str, Optional[str]]:
        return bodies[idx].label if idx >= 0 else NOTHING

    change = np.nonzero(labels != np.roll(labels, 1))[0]
    if change.shape[0] == 0:
        return NavPie((Slice(0.0, 360.0, label_of(int(labels[0]))),), pose)
    slices = []
    for k in range(change.shape[0]):
        i = int(change[k])
        j = int(change[(k + 1) % change.shape[0]])
        slices.append(Slice(float(bearings[i]), float(bearings[j]), label_of(int(labels[i]))))
    slices.sort(key=lambda s: s.start)
    return NavPie(tuple(slices), pose)
