"""Command-line front door: headless runs, metrics, scene generation,
pie dumps, and the live session server."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import NAMED_CONFIGS, EngineConfig, load_config
from .docs import DocumentError
from .replay import compute_metrics, dump_navpie, load_trace, run_trace
from .events import parse_log
from .scene import PlayerPose, gen_aisle, gen_segment, gen_terraformers, gen_trial, load_scene, save_scene
from .geometry import Vec2


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e}") from e


def _load_config_arg(arg: str | None) -> EngineConfig:
    if arg is None:
        return EngineConfig()
    if arg in NAMED_CONFIGS:
        return NAMED_CONFIGS[arg]()
    return load_config(_read(arg))


def cmd_run(args) -> int:
    scene = load_scene(_read(args.scene))
    trace = load_trace(_read(args.trace))
    cfg = _load_config_arg(args.config)
    log_text, report = run_trace(scene, trace, cfg, seed=args.seed)
    Path(args.out).write_text(log_text)
    if args.metrics_out:
        Path(args.metrics_out).write_text(report.text())
    else:
        sys.stdout.write(report.text())
    return 0


def cmd_metrics(args) -> int:
    records = parse_log(_read(args.log))
    report = compute_metrics(records)
    sys.stdout.write(report.text())
    return 0


def cmd_gen(args) -> int:
    kind = args.what
    if kind == "aisle":
        scene = gen_aisle(args.seed)
    elif kind == "terraformers":
        scene = gen_terraformers()
    elif kind == "segment":
        if args.n is None:
            raise DocumentError("gen segment needs N")
        scene, _ = gen_segment(args.n)
    elif kind == "trial":
        if args.n is None:
            raise DocumentError("gen trial needs N")
        scene = gen_trial(args.n)
    else:
        raise DocumentError(f"unknown generator '{kind}'")
    text = save_scene(scene)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_navpie(args) -> int:
    scene = load_scene(_read(args.scene))
    if args.x is None and args.y is None and args.heading is None:
        pose = scene.spawn
    else:
        pose = PlayerPose(
            Vec2(args.x if args.x is not None else scene.spawn.position.x,
                 args.y if args.y is not None else scene.spawn.position.y),
            args.heading if args.heading is not None else scene.spawn.heading,
        )
    sys.stdout.write(dump_navpie(scene, pose))
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    serve(args.scenes, config=_load_config_arg(args.config), seed=args.seed, host=args.host, port=args.port)
    return 0


def cmd_session_stdio(args) -> int:
    from .server import stdio_session

    stdio_session(args.scenes, config=_load_config_arg(args.config), seed=args.seed,
                  transcript_out=args.transcript_out, log_out=args.log_out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="navstick", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    run = sub.add_parser("run", help="replay a trace headlessly")
    run.add_argument("--scene", required=True)
    run.add_argument("--trace", required=True)
    run.add_argument("--config", help="config file or name (default/study1/explorer)")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", required=True, help="event log output path")
    run.add_argument("--metrics-out")
    run.set_defaults(fn=cmd_run)

    met = sub.add_parser("metrics", help="recompute metrics from a log")
    met.add_argument("--log", required=True)
    met.set_defaults(fn=cmd_metrics)

    gen = sub.add_parser("gen", help="generate a scene document")
    gen.add_argument("what", choices=["aisle", "terraformers", "segment", "trial"])
    gen.add_argument("n", nargs="?", type=int, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")
    gen.set_defaults(fn=cmd_gen)

    pie = sub.add_parser("navpie", help="dump the slice table at a pose")
    pie.add_argument("--scene", required=True)
    pie.add_argument("--x", type=float)
    pie.add_argument("--y", type=float)
    pie.add_argument("--heading", type=float)
    pie.set_defaults(fn=cmd_navpie)

    srv = sub.add_parser("serve", help="websocket session server for the web client")
    srv.add_argument("--scenes", nargs="+", default=["trial:1"],
                     help="scene specs: file paths or aisle/terraformers/segment:N/trial:N")
    srv.add_argument("--config")
    srv.add_argument("--seed", type=int, default=0)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8765)
    srv.set_defaults(fn=cmd_serve)

    std = sub.add_parser("session-stdio", help="line-protocol session over stdin/stdout")
    std.add_argument("--scenes", nargs="+", default=["trial:1"])
    std.add_argument("--config")
    std.add_argument("--seed", type=int, default=0)
    std.add_argument("--transcript-out")
    std.add_argument("--log-out")
    std.set_defaults(fn=cmd_session_stdio)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
