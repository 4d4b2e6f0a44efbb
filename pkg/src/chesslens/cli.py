"""Batch command-line front end.

Subcommands: analyze (PGN -> JSON report, optional CSV/SVG), encode
(FEN -> perspective vectors), trajectory (PGN -> CSV), fetch (HTTP ->
PGN file), calibrate (labeled games -> fitted config), perft (move
generator check). Outputs are byte-identical for identical inputs and
flags unless --stamp adds a timestamp.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import datetime
import os
import re
import sys
from typing import List, Optional, Tuple

from . import __version__
from .board import Color, parse_fen, perft, startpos
from .calibration import fit_config, load_labeled
from .features import encode_both
from .jsonutil import dumps_fixed
from .pgn import PgnError, parse_pgn
from .recognition import detect_events
from .space import ConfigError, SpaceConfig, default_config, load_config
from .svg import render_game_svgs
from .trajectory import DualTrajectories, Trajectory, build_trajectories, smooth, write_trajectory_csv
from .validation import check_smooth_window

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2
EXIT_NETWORK = 3
EXIT_INFEASIBLE = 4

ENV_CONFIG = "CONCEPT_SPACE_CONFIG"
ENV_FETCH_URL = "CONCEPT_SPACE_FETCH_URL"
REPORT_HEADERS = ("Event", "Site", "Date", "Round", "White", "Black", "Result")


def _fail(message: str, code: int) -> int:
    print(f"chesslens: error: {message}", file=sys.stderr)
    return code


def resolve_config(flag_path: Optional[str]) -> SpaceConfig:
    """--config flag, then CONCEPT_SPACE_CONFIG, then the packaged default."""
    if flag_path:
        return load_config(flag_path)
    env_path = os.environ.get(ENV_CONFIG)
    if env_path:
        return load_config(env_path)
    return default_config()


def split_games(text: str) -> List[str]:
    """Split multi-game PGN text into per-game chunks without parsing moves.

    A chunk boundary is a tag line at brace depth zero after movetext has
    been seen, so one malformed game cannot poison its neighbours.
    """
    chunks: List[str] = []
    current: List[str] = []
    depth = 0
    seen_moves = False
    for line in text.splitlines():
        stripped = line.strip()
        if depth == 0 and stripped.startswith("[") and seen_moves:
            chunks.append("\n".join(current))
            current = []
            seen_moves = False
        if depth == 0 and stripped.startswith("%"):
            current.append(line)
            continue
        content = False
        for ch in line:
            if depth > 0:
                if ch == "}":
                    depth -= 1
            elif ch == "{":
                depth += 1
            elif ch == ";":
                break
            elif not ch.isspace():
                content = True
        if depth == 0 and content and not stripped.startswith("["):
            seen_moves = True
        current.append(line)
    if any(line.strip() for line in current):
        chunks.append("\n".join(current))
    return chunks


def _read_inputs(paths: List[str]) -> List[Tuple[str, str]]:
    """All game chunks across the input files, tagged with fallback ids."""
    tasks = []
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        stem = os.path.splitext(os.path.basename(path))[0]
        for i, chunk in enumerate(split_games(text)):
            tasks.append((f"{stem}-{i + 1}", chunk))
    return tasks


def _process_game(task):
    """Worker: parse one game chunk, build trajectories, detect events."""
    fallback_id, chunk, cfg, smooth_window = task
    try:
        games = parse_pgn(chunk)
        if not games:
            raise PgnError("no game found in chunk")
        record = games[0]
        dual = build_trajectories(record)
        events = detect_events(dual, cfg, smooth_window=smooth_window)
    except (PgnError, ValueError) as exc:
        return ((fallback_id, None, None, None, str(exc)), None)
    return ((fallback_id, record.game_id, record.headers, events, None), dual)


def _run_batch(tasks, jobs: int):
    """Run workers, preserving input order. Returns list of (meta, dual)."""
    if jobs > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_process_game, tasks))
    return [_process_game(t) for t in tasks]


def _dedup_ids(entries: List[dict]) -> None:
    seen = {}
    for entry in entries:
        gid = entry["game_id"]
        count = seen.get(gid, 0) + 1
        seen[gid] = count
        if count > 1:
            entry["game_id"] = f"{gid}-{count}"


def _selected_headers(headers) -> dict:
    present = {}
    for key, value in headers:
        if key in REPORT_HEADERS and key not in present:
            present[key] = value
    return {key: present[key] for key in REPORT_HEADERS if key in present}


def _trajectory_dict(t: Trajectory) -> dict:
    return {
        "perspective": str(t.perspective),
        "move_numbers": list(t.move_numbers),
        "sides_moved": list(t.sides_moved),
        "values": [[float(x) for x in row] for row in t.values],
    }


def _event_passes(event, perspective: str) -> bool:
    return perspective == "both" or str(event.perspective) == perspective


def cmd_analyze(args) -> int:
    try:
        cfg = resolve_config(args.config)
        window = check_smooth_window(args.smooth_window)
    except (ConfigError, ValueError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        tasks = _read_inputs(args.inputs)
    except OSError as exc:
        return _fail(str(exc), EXIT_USAGE)
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)
    results = _run_batch(
        [(fid, chunk, cfg, window) for fid, chunk in tasks], jobs
    )
    os.makedirs(args.out, exist_ok=True)
    entries = []
    duals = []
    failed = 0
    for meta, dual in results:
        fallback_id, game_id, headers, events, error = meta
        if error is not None:
            failed += 1
            entries.append({"game_id": fallback_id, "error": error, "events": []})
            duals.append(None)
            continue
        kept = [e for e in events if _event_passes(e, args.perspective)]
        entries.append(
            {
                "game_id": game_id,
                "headers": _selected_headers(headers),
                "events": [e.to_dict() for e in kept],
            }
        )
        duals.append(dual)
    _dedup_ids(entries)
    for entry, dual in zip(entries, duals):
        if dual is None:
            continue
        gid = entry["game_id"]
        if args.embed_trajectories:
            entry["trajectories"] = [
                _trajectory_dict(dual.white),
                _trajectory_dict(dual.black),
            ]
        if args.csv:
            with open(os.path.join(args.out, f"{gid}.csv"), "w", encoding="utf-8") as fh:
                write_trajectory_csv([dual.white, dual.black], fh)
        if args.svg:
            renamed = DualTrajectories(
                white=_with_game_id(dual.white, gid),
                black=_with_game_id(dual.black, gid),
            )
            for domain, text in render_game_svgs(renamed, cfg).items():
                path = os.path.join(args.out, f"{gid}_{domain}.svg")
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(text)
    report = {
        "tool_version": __version__,
        "config_version": cfg.version,
    }
    if args.stamp:
        report["generated_at"] = (
            datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        )
    report["games"] = entries
    with open(os.path.join(args.out, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(dumps_fixed(report))
    return EXIT_PARTIAL if failed else EXIT_OK


def _with_game_id(t: Trajectory, gid: str) -> Trajectory:
    if t.game_id == gid:
        return t
    return Trajectory(gid, t.perspective, t.values, t.move_numbers, t.sides_moved)


def cmd_encode(args) -> int:
    try:
        position = parse_fen(args.fen)
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    pair = encode_both(position)
    document = {
        "fen": args.fen,
        "white": {d: float(v) for d, v in pair.white.as_dict().items()},
        "black": {d: float(v) for d, v in pair.black.as_dict().items()},
    }
    sys.stdout.write(dumps_fixed(document))
    return EXIT_OK


def cmd_trajectory(args) -> int:
    window = None
    if args.smooth_window is not None:
        try:
            window = check_smooth_window(args.smooth_window)
        except ValueError as exc:
            return _fail(str(exc), EXIT_USAGE)
    try:
        tasks = _read_inputs(args.inputs)
    except OSError as exc:
        return _fail(str(exc), EXIT_USAGE)
    os.makedirs(args.out, exist_ok=True)
    failed = 0
    entries = []
    for fallback_id, chunk in tasks:
        try:
            record = parse_pgn(chunk)[0]
            dual = build_trajectories(record)
        except (PgnError, ValueError, IndexError) as exc:
            failed += 1
            print(f"chesslens: {fallback_id}: {exc}", file=sys.stderr)
            continue
        entries.append((record.game_id, dual))
    names = [{"game_id": gid} for gid, _ in entries]
    _dedup_ids(names)
    for named, (_, dual) in zip(names, entries):
        gid = named["game_id"]
        with open(os.path.join(args.out, f"{gid}.csv"), "w", encoding="utf-8") as fh:
            write_trajectory_csv(
                [_with_game_id(dual.white, gid), _with_game_id(dual.black, gid)], fh
            )
        if window is not None and window > 1:
            smoothed = [
                _with_game_id(smooth(dual.white, window), gid),
                _with_game_id(smooth(dual.black, window), gid),
            ]
            path = os.path.join(args.out, f"{gid}_smooth{window}.csv")
            with open(path, "w", encoding="utf-8") as fh:
                write_trajectory_csv(smoothed, fh)
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_fetch(args) -> int:
    template = args.url_template or os.environ.get(ENV_FETCH_URL)
    if not template:
        return _fail(
            "no URL template: pass --url-template or set " + ENV_FETCH_URL,
            EXIT_USAGE,
        )
    if "{id}" not in template:
        return _fail("URL template must contain '{id}'", EXIT_USAGE)
    import requests

    url = template.replace("{id}", args.game_ref)
    try:
        response = requests.get(url, timeout=args.timeout)
    except requests.RequestException as exc:
        return _fail(f"fetch failed: {exc}", EXIT_NETWORK)
    if not 200 <= response.status_code < 300:
        return _fail(f"fetch failed: HTTP {response.status_code}", EXIT_NETWORK)
    body = response.text
    if not body.strip():
        return _fail("fetch failed: empty response body", EXIT_NETWORK)
    os.makedirs(args.out, exist_ok=True)
    safe = re.sub(r"[^A-Za-z0-9_-]", "_", args.game_ref) or "game"
    path = os.path.join(args.out, f"{safe}.pgn")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(body)
    print(path)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    try:
        cfg = resolve_config(args.config)
        window = check_smooth_window(args.smooth_window)
        positives, negatives = load_labeled(args.labeled)
    except (ConfigError, ValueError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    result = fit_config(cfg, positives, negatives, smooth_window=window)
    os.makedirs(args.out, exist_ok=True)
    config_path = os.path.join(args.out, "fitted_space.json")
    with open(config_path, "w", encoding="utf-8") as fh:
        fh.write(dumps_fixed(result.config.to_dict()))
    report_path = os.path.join(args.out, "calibration_report.json")
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(dumps_fixed(result.summary_dict()))
    for case in result.diagnostics:
        status = "detected" if case["detected"] else "MISSED"
        window_text = "-".join(str(m) for m in case["expected_start_move"])
        print(
            f"{case['game_id']} {case['concept']} ({case['perspective']}, "
            f"expected {window_text}): {status}"
        )
    print(
        f"positives {result.detected}/{result.total_positives}, "
        f"false events {result.false_events}, volume {result.volume:.6f}, "
        f"sweeps {result.sweeps}"
    )
    print(f"wrote {config_path}")
    if not result.feasible:
        print(
            "chesslens: calibration infeasible: "
            f"{result.detected}/{result.total_positives} positives detected, "
            f"{result.false_events} events on negative games",
            file=sys.stderr,
        )
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_perft(args) -> int:
    try:
        position = parse_fen(args.fen) if args.fen else startpos()
        if args.depth < 0:
            raise ValueError("depth must be >= 0")
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    print(perft(position, args.depth))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chesslens",
        description="Concept-space analysis of chess games.",
    )
    parser.add_argument("--version", action="version", version=f"chesslens {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="detect strategy episodes in PGN games")
    analyze.add_argument("inputs", nargs="+", metavar="PGN")
    analyze.add_argument("--config", help="space configuration JSON path")
    analyze.add_argument("--out", default="out", help="output directory")
    analyze.add_argument("--csv", action="store_true", help="write trajectory CSVs")
    analyze.add_argument("--svg", action="store_true", help="write domain projection SVGs")
    analyze.add_argument("--perspective", choices=("white", "black", "both"),
                         default="both", help="keep only this perspective's events")
    analyze.add_argument("--smooth-window", type=int, default=3)
    analyze.add_argument("--jobs", type=int, default=0,
                         help="parallel workers (default: all cores)")
    analyze.add_argument("--stamp", action="store_true",
                         help="add a generation timestamp to the report")
    analyze.add_argument("--embed-trajectories", action="store_true",
                         help="embed full trajectories in the report")
    analyze.set_defaults(func=cmd_analyze)

    encode = sub.add_parser("encode", help="encode one FEN for both perspectives")
    encode.add_argument("fen")
    encode.set_defaults(func=cmd_encode)

    trajectory = sub.add_parser("trajectory", help="write trajectory CSVs for PGN games")
    trajectory.add_argument("inputs", nargs="+", metavar="PGN")
    trajectory.add_argument("--out", default="out")
    trajectory.add_argument("--smooth-window", type=int, default=None,
                            help="also write a smoothed CSV with this window")
    trajectory.set_defaults(func=cmd_trajectory)

    fetch = sub.add_parser("fetch", help="download a game over HTTP as PGN")
    fetch.add_argument("game_ref", help="identifier substituted into the URL template")
    fetch.add_argument("--url-template",
                       help="URL containing '{id}' (default: $" + ENV_FETCH_URL + ")")
    fetch.add_argument("--out", default=".")
    fetch.add_argument("--timeout", type=float, default=30.0)
    fetch.set_defaults(func=cmd_fetch)

    calibrate = sub.add_parser("calibrate", help="fit region bounds to labeled games")
    calibrate.add_argument("labeled", help="labeled cases JSON file")
    calibrate.add_argument("--config", help="base configuration (default: packaged)")
    calibrate.add_argument("--out", default="out")
    calibrate.add_argument("--smooth-window", type=int, default=3)
    calibrate.set_defaults(func=cmd_calibrate)

    perft_cmd = sub.add_parser("perft", help="count legal move paths to a depth")
    perft_cmd.add_argument("depth", type=int)
    perft_cmd.add_argument("--fen", help="start position (default: initial)")
    perft_cmd.set_defaults(func=cmd_perft)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(run())
