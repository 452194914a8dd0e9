"""Command-line interface.

Subcommands: ``serve``, ``simulate``, ``replay``, ``train``.

Configuration precedence: explicit flags beat INTENTSCALE_* environment
variables, which beat values from the scenario file.

Exit codes: 0 success, 1 usage or failed check, 2 I/O or bad input
file, 3 session hit the timeout and produced incomplete metrics.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import IntentScaleError
from .service.logs import load_log, write_log
from .service.replay import replay_records
from .service.snapshot import load_snapshot, save_snapshot
from .sim.runner import run_headless
from .sim.scenario import load_scenario

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INCOMPLETE = 3

ENV_PREFIX = "INTENTSCALE_"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _env(name: str) -> str | None:
    return os.environ.get(ENV_PREFIX + name)


def _resolve(flag, env_name: str, fallback=None, convert=str):
    if flag is not None:
        return flag
    env_value = _env(env_name)
    if env_value is not None:
        return convert(env_value)
    return fallback


def build_parser() -> _Parser:
    parser = _Parser(prog="intentscale", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the live telemetry/control server")
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--host", default=None)
    serve.add_argument("--scenario", default=None)
    serve.add_argument("--snapshot", default=None, help="pre-trained model snapshot")
    serve.add_argument("--ui-dir", default=None, help="static frontend directory")

    simulate = sub.add_parser("simulate", help="run a headless scripted session")
    simulate.add_argument("--scenario", default=None)
    simulate.add_argument(
        "--mode", default=None, help="fixed:<s> | adaptive | adaptive-ma"
    )
    simulate.add_argument("--seed", type=int, default=None)
    simulate.add_argument("--out", default=None, help="metrics JSON output path")
    simulate.add_argument("--log", default=None, help="session JSONL output path")
    simulate.add_argument("--snapshot", default=None, help="pre-trained model snapshot")

    replay = sub.add_parser(
        "replay", help="re-run a logged session and verify the scale sequence"
    )
    replay.add_argument("--log", required=True)
    replay.add_argument("--snapshot", default=None)

    train = sub.add_parser("train", help="train a model snapshot from a session log")
    train.add_argument("--log", required=True)
    train.add_argument("--out", required=True)

    return parser


def _load_models(snapshot_path):
    if snapshot_path is None:
        return None, None
    bank, params = load_snapshot(snapshot_path)
    return bank, params


def cmd_simulate(args) -> int:
    scenario_ref = _resolve(args.scenario, "SCENARIO")
    if scenario_ref is None:
        print("simulate: --scenario is required (or INTENTSCALE_SCENARIO)", file=sys.stderr)
        return EXIT_USAGE
    scenario = load_scenario(scenario_ref)
    mode = _resolve(args.mode, "MODE", "adaptive")
    seed = _resolve(args.seed, "SEED", scenario.seed, int)
    models, _ = _load_models(_resolve(args.snapshot, "SNAPSHOT"))

    metrics = run_headless(scenario, mode=mode, seed=seed, models=models)

    if args.log:
        write_log(args.log, metrics.records)
    payload = json.dumps(metrics.to_json_dict(), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return EXIT_INCOMPLETE if metrics.incomplete else EXIT_OK


def cmd_replay(args) -> int:
    records = load_log(args.log)
    models, _ = _load_models(_resolve(args.snapshot, "SNAPSHOT"))
    result = replay_records(records, models=models)
    if result.matched:
        print(f"replay OK: {result.n_ticks} ticks, scale sequence identical")
        return EXIT_OK
    print(
        f"replay MISMATCH at tick {result.first_mismatch}: "
        f"logged {result.logged_s[result.first_mismatch]} "
        f"!= replayed {result.replayed_s[result.first_mismatch]}",
        file=sys.stderr,
    )
    return EXIT_USAGE


def cmd_train(args) -> int:
    from .adaptation import ControllerParams
    from .engine import EngineConfig
    from .fcm import FEATURE_KINDS, ModelBank, assign_semantic_labels, fcm_train
    from .features import KinematicEstimate, extract_features
    from .trajectory import FollowerState, PoseSample, TrajectoryWindow

    records = load_log(args.log)
    header = next((r for r in records if r.get("event") == "header"), {})
    config = EngineConfig.from_dict(header.get("engine", {}))

    window = TrajectoryWindow(config.n_window)
    start = list(config.follower_start)
    follower = FollowerState(
        position=start,
        tool_tip=[a + b for a, b in zip(start, config.tool_offset)],
    )
    kin = KinematicEstimate.initial(follower.tool_dir)
    feats = []
    clutched = False
    for record in records:
        if "event" in record:
            continue
        if record["clutch"] and not clutched:
            window.clear()
        clutched = record["clutch"]
        if not clutched:
            continue
        window.push(PoseSample(t=record["t"], position=record["leader"], clutch=True))
        if len(window) >= 2:
            fv = extract_features(window, kin, config.k_velocity, config.eps_velocity)
            kin = kin.advanced(kin.velocity, kin.tool_dir, fv.alignness)
            feats.append(fv)

    bank = ModelBank()
    for kind in FEATURE_KINDS:
        values = [f.component(kind) for f in feats]
        bank = bank.with_model(
            kind, assign_semantic_labels(fcm_train(values, config.fcm, kind))
        )
    save_snapshot(args.out, bank, config.params)
    print(f"trained 3 models on {len(feats)} feature samples -> {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.server import LiveSession, create_app

    scenario_ref = _resolve(args.scenario, "SCENARIO", "pegtransfer-4ring")
    scenario = load_scenario(scenario_ref)
    models, params = _load_models(_resolve(args.snapshot, "SNAPSHOT"))
    session = LiveSession(scenario, models=models)
    app = create_app(session, ui_dir=_resolve(args.ui_dir, "UI_DIR"))
    host = _resolve(args.host, "HOST", "127.0.0.1")
    port = _resolve(args.port, "PORT", 8000, int)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": cmd_simulate,
        "replay": cmd_replay,
        "train": cmd_train,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"intentscale {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except IntentScaleError as exc:
        print(f"intentscale {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"intentscale {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
