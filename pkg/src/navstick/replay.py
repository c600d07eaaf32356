"""Trace files, headless replay, and navigation metrics.

A trace is line-delimited input records (schema-versioned): stick
vectors and button edges per tick, plus optional facilitator control
records. Missing ticks hold the previous stick state with no new edges.
Replays are deterministic: the same (scene, seed, trace) triple yields a
byte-identical event log, and every metric is recomputed from the log
alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .config import EngineConfig
from .docs import DocumentError, dumps_canonical, dumps_line, loads
from .events import AudioEvent, EventLog, GameEvent, parse_log
from .geometry import shape_distance
from .scene import Scene
from .sim import GameRuntime, InputSample
from .stick import StickSample
from .visibility import compute_navpie

TRACE_FORMAT = "navstick-trace"
TRACE_VERSION = 1

CONTROL_OPS = ("advance_segment", "repeat_segment", "set_tool", "toggle_graphics")


@dataclass(frozen=True)
class ControlRecord:
    tick: int
    op: str
    arg: Optional[str] = None


TraceRecord = Union[InputSample, ControlRecord]


def trace_header() -> str:
    return dumps_line({"format": TRACE_FORMAT, "version": TRACE_VERSION})


def encode_trace_record(r: TraceRecord) -> str:
    if isinstance(r, ControlRecord):
        body = {"op": r.op}
        if r.arg is not None:
            body["arg"] = r.arg
        return dumps_line({"control": body, "tick": r.tick})
    return dumps_line(
        {
            "buttons": dict(sorted(r.buttons.items())),
            "ls": {"x": float(r.left_stick.x), "y": float(r.left_stick.y)},
            "rs": {"x": float(r.right_stick.x), "y": float(r.right_stick.y)},
            "tick": r.tick,
        }
    )


def save_trace(records: list[TraceRecord]) -> str:
    return "".join(line + "\n" for line in [trace_header()] + [encode_trace_record(r) for r in records])


def load_trace(text: str) -> list[TraceRecord]:
    records: list[TraceRecord] = []
    last_tick = 0
    saw_header = False
    for i, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        obj = loads(line)
        if "format" in obj:
            if obj.get("format") != TRACE_FORMAT:
                raise DocumentError(f"unexpected trace format {obj.get('format')!r}", f"line {i + 1}")
            saw_header = True
            continue
        tick = int(obj["tick"])
        if tick <= last_tick:
            raise DocumentError(f"tick regression: {tick} after {last_tick}", f"line {i + 1}")
        last_tick = tick
        if "control" in obj:
            body = obj["control"]
            op = str(body["op"])
            if op not in CONTROL_OPS:
                raise DocumentError(f"unknown control op '{op}'", f"line {i + 1}")
            records.append(ControlRecord(tick, op, body.get("arg")))
        else:
            ls = obj.get("ls", {})
            rs = obj.get("rs", {})
            records.append(
                InputSample(
                    tick=tick,
                    left_stick=StickSample(float(ls.get("x", 0.0)), float(ls.get("y", 0.0))),
                    right_stick=StickSample(float(rs.get("x", 0.0)), float(rs.get("y", 0.0))),
                    buttons={str(k): str(v) for k, v in obj.get("buttons", {}).items()},
                )
            )
    del saw_header
    return records


@dataclass
class MetricsReport:
    time_to_first_target: Optional[float] = None  # seconds
    pie_coverage: float = 0.0  # fraction of the circle scrubbed
    menu_passes: int = 0
    direction_reversals: int = 0
    answer_distance: Optional[float] = None  # filled by the distance op
    segments: list = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "answer_distance": self.answer_distance,
            "direction_reversals": self.direction_reversals,
            "menu_passes": self.menu_passes,
            "pie_coverage": float(self.pie_coverage),
            "segments": self.segments,
            "time_to_first_target": self.time_to_first_target,
        }

    def text(self) -> str:
        return dumps_canonical(self.to_doc())


class _ArcCoverage:
    """Union of swept bearing arcs, tracked as the uncovered remainder so
    full coverage is an exact 1.0, not a float sum."""

    def __init__(self) -> None:
        self.uncovered: list[tuple[float, float]] = [(0.0, 360.0)]

    def add(self, a: float, b: float) -> None:
        lo, hi = min(a, b), max(a, b)
        if hi - lo > 180.0:  # sweep the minor arc, wrapping through north
            self._cut(hi, 360.0)
            self._cut(0.0, lo)
        else:
            self._cut(lo, hi)

    def _cut(self, lo: float, hi: float) -> None:
        if hi <= lo:
            return
        out: list[tuple[float, float]] = []
        for a, b in self.uncovered:
            if hi <= a or lo >= b:
                out.append((a, b))
                continue
            if a < lo:
                out.append((a, lo))
            if hi < b:
                out.append((hi, b))
        self.uncovered = out

    @property
    def fraction(self) -> float:
        left = sum(b - a for a, b in self.uncovered)
        if left <= 0.0:
            return 1.0
        return (360.0 - left) / 360.0


def compute_metrics(records: list[Union[AudioEvent, GameEvent]], tick_rate: int = 60) -> MetricsReport:
    """Pure function of the event log; the run emits exactly this."""
    report = MetricsReport()
    coverage = _ArcCoverage()
    covered_any = False
    last_scrub: Optional[tuple[int, float]] = None
    menu_count = 0
    run_dir: Optional[str] = None
    run_indices: set[int] = set()
    last_step_dir: Optional[str] = None
    seg_open: dict[str, object] = {}
    for rec in records:
        if isinstance(rec, AudioEvent):
            if (
                report.time_to_first_target is None
                and rec.channel == "speech"
                and rec.action == "start"
                and rec.source_entity is not None
            ):
                report.time_to_first_target = round(rec.tick / tick_rate, 6)
            continue
        if rec.kind == "scrub_sample":
            bearing = float(rec.data["bearing"])
            if last_scrub is not None and rec.tick - last_scrub[0] == 1:
                coverage.add(last_scrub[1], bearing)
                covered_any = True
            last_scrub = (rec.tick, bearing)
        elif rec.kind == "menu_opened":
            menu_count = int(rec.data["count"])
            run_dir = None
            run_indices = set()
            last_step_dir = None
        elif rec.kind == "menu_step":
            direction = str(rec.data["direction"])
            index = int(rec.data["index"])
            if last_step_dir is not None and direction != last_step_dir:
                report.direction_reversals += 1
            last_step_dir = direction
            if direction != run_dir:
                run_dir = direction
                run_indices = set()
            run_indices.add(index)
            if menu_count and len(run_indices) == menu_count:
                report.menu_passes += 1
                run_indices = set()
        elif rec.kind == "segment_started":
            seg_open = {
                "scene": rec.data["scene"],
                "attempt": rec.data["attempt"],
                "started_tick": rec.tick,
                "completed": False,
                "time_s": None,
            }
        elif rec.kind == "segment_completed":
            seg_open = dict(seg_open or {})
            seg_open.update(
                scene=rec.data["scene"],
                attempt=rec.data["attempt"],
                completed=True,
                time_s=rec.data["time_s"],
            )
            report.segments.append(_seg_row(seg_open))
            seg_open = {}
        elif rec.kind == "segment_failed":
            row = dict(seg_open or {})
            row.update(scene=rec.data["scene"], attempt=rec.data["attempt"], completed=False)
            report.segments.append(_seg_row(row))
            seg_open = {}
    if seg_open:
        report.segments.append(_seg_row(seg_open))
    report.pie_coverage = coverage.fraction if covered_any else 0.0
    return report


def _seg_row(row: dict) -> dict:
    return {
        "attempt": row.get("attempt"),
        "completed": bool(row.get("completed")),
        "scene": row.get("scene"),
        "time_s": row.get("time_s"),
    }


def run_trace(
    scene: Scene,
    trace: list[TraceRecord],
    config: Optional[EngineConfig] = None,
    seed: int = 0,
) -> tuple[str, MetricsReport]:
    """Deterministic headless replay of one scene. Returns (log text,
    metrics recomputed from that log)."""
    log_text = run_session([scene], trace, config, seed)
    report = compute_metrics(parse_log(log_text), (config or EngineConfig()).tick_rate)
    return log_text, report


def run_session(
    scenes: list[Scene],
    trace: list[TraceRecord],
    config: Optional[EngineConfig] = None,
    seed: int = 0,
) -> str:
    """Replay across a scene playlist; control records advance/repeat
    segments exactly as a live facilitator would."""
    cfg = config or EngineConfig()
    log = EventLog()
    index = 0
    runtime = GameRuntime(scenes[index], cfg, seed=seed, log=log)
    by_tick: dict[int, TraceRecord] = {}
    last_tick = 0
    for r in trace:
        by_tick[r.tick] = r
        last_tick = max(last_tick, r.tick)
    held = InputSample(tick=0)
    for t in range(1, last_tick + 1):
        rec = by_tick.get(t)
        if isinstance(rec, ControlRecord):
            if rec.op == "toggle_graphics":
                log.game(t, "graphics_toggled", {})  # client-side concern only
            else:
                runtime.finish()
                if rec.op == "advance_segment":
                    index += 1
                    if index >= len(scenes):
                        break
                elif rec.op == "set_tool" and rec.arg:
                    cfg = _with_tool(cfg, rec.arg)
                # repeat_segment (and set_tool) restart the current scene
                runtime = GameRuntime(scenes[index], cfg, seed=seed, log=log, start_tick=t)
                held = InputSample(tick=0)
                continue
        if isinstance(rec, InputSample):
            sample = InputSample(t, rec.left_stick, rec.right_stick, rec.buttons)
            held = rec
        else:
            sample = InputSample(t, held.left_stick, held.right_stick, {})
        runtime.step(sample)
    runtime.finish()
    return log.text()


def _with_tool(cfg: EngineConfig, tool: str):
    from dataclasses import replace

    return replace(cfg, tool=tool)


def answer_distance(scene: Scene, prompt_item: str, answer_item: str) -> float:
    """Edge-to-edge distance between two aisle items; adjacent airtight
    items score exactly 0."""
    if prompt_item == answer_item:
        raise DocumentError("answer must name a different item than the prompt")
    try:
        a = scene.entity(prompt_item)
        b = scene.entity(answer_item)
    except KeyError as e:
        raise DocumentError(f"unknown item {e.args[0]!r}") from None
    return shape_distance(a.shape, b.shape)


def clock_position(bearing: float) -> str:
    hour = round((bearing % 360.0) / 30.0) % 12
    return f"{12 if hour == 0 else hour} o'clock"


def dump_navpie(scene: Scene, pose) -> str:
    """Slice table: start, end, label, clock position of the midpoint."""
    pie = compute_navpie(scene, pose)
    rows = [f"{'start':>10}  {'end':>10}  {'label':<28}  clock"]
    for s in pie.slices:
        mid = (s.start + s.extent / 2.0) % 360.0
        kind, target = s.label
        if kind == "poi":
            label = f"poi:{target} ({scene.entity(target).name})"
        elif kind == "obstruction":
            label = f"obstruction:{target}"
        else:
            label = "nothing"
        rows.append(f"{s.start:>10.4f}  {s.end:>10.4f}  {label:<28}  {clock_position(mid)}")
    return "\n".join(rows) + "\n"
