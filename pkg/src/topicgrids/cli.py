"""Command-line entry points: layout, bench, pipeline, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bench import DEFAULT_TRIALS, run_benchmark
from .io import read_points_csv, write_placement_csv
from .risk import IngestError, Window, parse_timestamp
from .sd import infer_grid_exponent, split_diffuse
from .snapshot import PipelineConfig, build_snapshot


def _parse_trials(raw: str | None) -> dict[int, int] | int | None:
    if raw is None:
        return None
    if ":" not in raw:
        return int(raw)
    spec = {}
    for part in raw.split(","):
        side, count = part.split(":")
        spec[int(side)] = int(count)
    return spec


def _parse_window(raw: str | None) -> Window | None:
    if raw is None:
        return None
    start, end = raw.split("/")
    return Window(parse_timestamp(start), parse_timestamp(end))


def cmd_layout(args) -> int:
    points = read_points_csv(args.points)
    h = args.h if args.h is not None else infer_grid_exponent(len(points))
    placement = split_diffuse(points, h)
    if args.out == "-":
        write_placement_csv(placement, sys.stdout)
    else:
        write_placement_csv(placement, args.out)
    return 0


def cmd_bench(args) -> int:
    layouts = [int(s) for s in args.layouts.split(",")]
    samplers = [s.strip().upper() for s in args.samplers.split(",")]
    report = run_benchmark(layouts, samplers, trials=_parse_trials(args.trials), master_seed=args.seed)
    print(report.format_table())
    if args.json:
        payload = json.dumps(report.to_json_dict(), indent=1, sort_keys=True)
        if args.json == "-":
            print(payload)
        else:
            Path(args.json).write_text(payload + "\n", encoding="utf-8")
    return 0


def cmd_pipeline(args) -> int:
    config = PipelineConfig(
        topics=args.topics,
        seed=args.seed,
        iterations=args.iterations,
        method=args.method,
        window=_parse_window(args.window),
        window_days=args.window_days,
        anonymize=args.anonymize,
    )
    out = build_snapshot(args.logs, args.out, config)
    print(f"snapshot written to {out}")
    return 0


def cmd_serve(args) -> int:
    from .server import serve_api

    serve_api(
        args.snapshot,
        port=args.port,
        host=args.host,
        cors_origin=args.cors_origin,
        ui_dir=args.ui_dir,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topicgrids")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("layout", help="grid-place a CSV of 2-D points")
    p.add_argument("points", help="points CSV with header idx,x,y")
    p.add_argument("--h", type=int, default=None, help="grid exponent (default: inferred from the point count)")
    p.add_argument("--out", default="-", help="placement CSV path, '-' for stdout")
    p.set_defaults(fn=cmd_layout)

    p = sub.add_parser("bench", help="Monte-Carlo error-ratio benchmark")
    p.add_argument("--layouts", default="4,8,16,32,64", help="comma-separated grid sides")
    p.add_argument("--samplers", default="U,G", help="comma-separated samplers (U, G)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--trials",
        default=None,
        help=f"count for all layouts, or side:count pairs (default {DEFAULT_TRIALS})",
    )
    p.add_argument("--json", default=None, help="write the JSON report here ('-' for stdout)")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("pipeline", help="fit a snapshot from a JSONL access log")
    p.add_argument("logs", help="JSONL access log")
    p.add_argument("--out", required=True, help="snapshot output directory")
    p.add_argument("--topics", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=500)
    p.add_argument("--method", choices=["mds", "tsne"], default="mds")
    p.add_argument("--window", default=None, help="current window as '<start ISO>/<end ISO>'")
    p.add_argument("--window-days", type=float, default=1.0, help="trailing window length when --window is unset")
    p.add_argument("--anonymize", action="store_true", help="hash topic labels")
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("serve", help="serve a snapshot over a read-only HTTP API")
    p.add_argument("snapshot", nargs="?", default=os.environ.get("TOPICGRIDS_SNAPSHOT"))
    p.add_argument("--port", type=int, default=int(os.environ.get("TOPICGRIDS_PORT", "8000")))
    p.add_argument("--host", default=os.environ.get("TOPICGRIDS_HOST", "127.0.0.1"))
    p.add_argument("--cors-origin", default=os.environ.get("TOPICGRIDS_CORS_ORIGIN"))
    p.add_argument("--ui-dir", default=None, help="also serve this static directory at /")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve" and not args.snapshot:
        print("error: snapshot directory required (argument or TOPICGRIDS_SNAPSHOT)", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except IngestError as exc:
        print(f"error: ingest failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
