"""Command line entry points: serve, autopilot, replay, analyze."""

from __future__ import annotations

import argparse
import json
import pathlib
import signal
import sys

from ..analysis import compute_rates, mann_whitney_u, parse_session_log
from ..bus import Bus
from ..scene import PRACTICE, TRIAL, count_towers
from .app import App, run_autopilot
from .autopilot import ScriptedOperator
from .config import from_dict, load_config
from .replay import replay

PHASES = {"trial": TRIAL, "practice": PRACTICE}

COMPARE_METRICS = ("placing_rate", "collapse_rate", "still_in_place_rate", "towers")


def _config_from(args) -> "AppConfig":
    return load_config(args.config) if args.config else from_dict({})


def _cmd_serve(args) -> int:
    config = _config_from(args)
    port = args.port if args.port is not None else config.port
    app = App(config, cameras=True, log_path=args.log)
    from ..bus.bridge import BusBridge

    ui_dir = pathlib.Path(args.ui if args.ui is not None else "frontend/dist")
    static = str(ui_dir) if ui_dir.is_dir() else None
    if args.ui is not None and static is None:
        print(f"error: --ui directory {args.ui!r} does not exist", file=sys.stderr)
        return 2
    bridge = BusBridge(app.bus, port=port, static_dir=static)
    bridge.start()

    def _stop(signum, frame):
        app.request_stop()

    signal.signal(signal.SIGTERM, _stop)
    signal.signal(signal.SIGINT, _stop)
    ui_note = f", console at http://127.0.0.1:{bridge.port}/ui/" if static else ""
    print(f"serving on port {bridge.port} (realtime={args.realtime}){ui_note}")
    try:
        app.run(None, realtime=args.realtime)
    finally:
        app.close("sigterm" if app.stopped else "complete")
        bridge.stop()
    return 0


def _cmd_autopilot(args) -> int:
    config = _config_from(args)
    app = run_autopilot(
        config,
        duration=args.duration,
        seed=args.seed,
        cameras=args.cameras,
        log_path=args.log,
    )
    towers = count_towers(app.recorder.events)
    print(f"autopilot finished: {args.duration:.0f} s simulated, {towers} towers")
    return 0


def _cmd_replay(args) -> int:
    bus = Bus()
    n = replay(args.log, args.speed, bus)
    print(f"replayed {n} events at {args.speed}x")
    bus.shutdown()
    return 0


def _analyze_one(path, phase: str) -> dict:
    events = parse_session_log(path)
    rates = compute_rates(events, phase=phase)
    out = {"log": str(path), "phase": phase}
    out.update(rates.as_dict())
    out["towers"] = count_towers(events)
    return out


def _metric_values(paths, metric: str) -> list[float]:
    values = []
    for path in paths:
        events = parse_session_log(path)
        if metric == "towers":
            values.append(float(count_towers(events)))
        else:
            values.append(getattr(compute_rates(events), metric))
    return values


def _print_table(d: dict) -> None:
    width = max(len(k) for k in d)
    for k, v in d.items():
        print(f"{k:<{width}}  {v}")


def _cmd_analyze(args) -> int:
    if args.analyze_cmd == "compare":
        a = _metric_values(args.a, args.metric)
        b = _metric_values(args.b, args.metric)
        r = mann_whitney_u(a, b)
        out = {
            "metric": args.metric,
            "a": a,
            "b": b,
            "U": r.U,
            "z": r.z,
            "p_two_sided": r.p_two_sided,
            "method": r.method,
            "tier": r.tier,
        }
        print(json.dumps(out, indent=2))
        return 0
    if not args.log:
        print("analyze: --log is required", file=sys.stderr)
        return 2
    out = _analyze_one(args.log, PHASES[args.phase])
    if args.table:
        _print_table(out)
    else:
        print(json.dumps(out, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twindesk")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("serve", help="run the simulation with the WebSocket bridge")
    p.add_argument("--config", default=None)
    p.add_argument("--realtime", action="store_true")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--log", default=None)
    p.add_argument("--ui", default=None, help="directory served under /ui (default: frontend/dist if present)")
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("autopilot", help="run a scripted session")
    p.add_argument("--config", default=None)
    p.add_argument("--duration", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--log", default=None)
    p.add_argument("--cameras", action="store_true")
    p.set_defaults(fn=_cmd_autopilot)

    p = sub.add_parser("replay", help="republish a session record")
    p.add_argument("--log", required=True)
    p.add_argument("--speed", type=float, default=1.0)
    p.set_defaults(fn=_cmd_replay)

    p = sub.add_parser("analyze", help="session metrics from a record")
    p.add_argument("--log", default=None)
    p.add_argument("--phase", choices=sorted(PHASES), default="trial")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=True)
    fmt.add_argument("--table", action="store_true")
    asub = p.add_subparsers(dest="analyze_cmd")
    pc = asub.add_parser("compare", help="Mann-Whitney U between two groups of logs")
    pc.add_argument("--a", nargs="+", required=True)
    pc.add_argument("--b", nargs="+", required=True)
    pc.add_argument("--metric", choices=COMPARE_METRICS, required=True)
    p.set_defaults(fn=_cmd_analyze)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
