"""Headless session runner and session metrics.

A session couples the scripted operator, the shared-control engine, and
the peg world in one fixed-timestep loop. Everything is pure simulation
time, so a (scenario, mode, seed) triple is fully deterministic and two
runs produce bit-identical logs and metrics.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ..engine import SharedControlEngine
from ..errors import InsufficientDataError
from ..fcm import FINE, ModelBank
from .scenario import Scenario

MODES = ("adaptive", "adaptive-ma")


def parse_mode(mode: str) -> tuple[float | None, bool]:
    """Returns (fixed_scale, apply_param_schedule) for a mode string."""
    if mode == "adaptive":
        return None, False
    if mode == "adaptive-ma":
        return None, True
    if mode.startswith("fixed:"):
        scale = float(mode.split(":", 1)[1])
        if scale <= 0:
            raise ValueError(f"fixed scale must be positive, got {scale}")
        return scale, False
    raise ValueError(f"unknown mode {mode!r}; use fixed:<s>, adaptive, adaptive-ma")


@dataclass
class SessionMetrics:
    n_clutch: int
    tct_s: float
    path_length_m: float
    label_accuracy: float | None
    align_path_ratio: float | None
    mode: str | None
    seed: int | None
    incomplete: bool
    n_ticks: int
    first_retrain_t: float | None
    records: list = field(default_factory=list, repr=False, compare=False)

    def to_json_dict(self) -> dict:
        """The metrics.json payload (fixed key set, deterministic order)."""
        return {
            "n_clutch": self.n_clutch,
            "tct_s": self.tct_s,
            "path_length_m": self.path_length_m,
            "label_accuracy": self.label_accuracy,
            "mode": self.mode,
            "seed": self.seed,
            "incomplete": self.incomplete,
        }


def compute_metrics(records: list[dict]) -> SessionMetrics:
    """Derive session metrics from a log record sequence."""
    ticks = [r for r in records if "event" not in r]
    if not ticks:
        raise InsufficientDataError("log contains no tick records")
    header = next((r for r in records if r.get("event") == "header"), {})
    end = next((r for r in records if r.get("event") == "end"), None)
    retrains = [r for r in records if r.get("event") == "retrain"]
    first_retrain_t = retrains[0]["t"] if retrains else None

    n_clutch = 0
    clutched = False
    for r in ticks:
        if r["clutch"] and not clutched:
            n_clutch += 1
        clutched = r["clutch"]

    followers = np.array([r["follower"] for r in ticks])
    path = float(np.linalg.norm(np.diff(followers, axis=0), axis=1).sum())

    label_accuracy = None
    if first_retrain_t is not None:
        scored = [
            r
            for r in ticks
            if r["t"] > first_retrain_t
            and r.get("label_true") is not None
            and r.get("label_pred") is not None
        ]
        if scored:
            hits = sum(r["label_pred"] == r["label_true"] for r in scored)
            label_accuracy = hits / len(scored)

    align_path_ratio = _align_path_ratio(ticks)

    return SessionMetrics(
        n_clutch=n_clutch,
        tct_s=float(ticks[-1]["t"] - ticks[0]["t"]),
        path_length_m=path,
        label_accuracy=label_accuracy,
        align_path_ratio=align_path_ratio,
        mode=header.get("mode"),
        seed=header.get("seed"),
        incomplete=not (end["complete"] if end is not None else True),
        n_ticks=len(ticks),
        first_retrain_t=first_retrain_t,
        records=list(records),
    )


def _align_path_ratio(ticks: list[dict]) -> float | None:
    """Path length over net displacement, summed across ground-truth fine
    runs; the tremor-amplification measure."""
    total_path = 0.0
    total_net = 0.0
    run: list[np.ndarray] = []
    for r in ticks + [{"label_true": None}]:
        if r.get("label_true") == FINE:
            run.append(np.asarray(r["follower"]))
            continue
        if len(run) >= 2:
            pts = np.array(run)
            total_path += float(np.linalg.norm(np.diff(pts, axis=0), axis=1).sum())
            total_net += float(np.linalg.norm(pts[-1] - pts[0]))
        run = []
    if total_net < 1e-9:
        return None
    return total_path / total_net


def run_headless(
    scenario: Scenario,
    mode: str = "adaptive",
    seed: int | None = None,
    models: ModelBank | None = None,
) -> SessionMetrics:
    """Run one full session to completion or timeout."""
    fixed_scale, apply_schedule = parse_mode(mode)
    seed = scenario.seed if seed is None else seed
    world = scenario.build_world()
    operator = scenario.build_operator(seed)
    engine = SharedControlEngine(scenario.engine, fixed_scale=fixed_scale, models=models)

    records: list[dict] = [
        {
            "event": "header",
            "format": 1,
            "scenario": scenario.name,
            "mode": mode,
            "seed": seed,
            "workspace_radius": scenario.workspace_radius,
            "engine": scenario.engine.to_dict(),
        }
    ]
    schedule = deque(scenario.param_schedule if apply_schedule else ())
    dt = scenario.engine.dt
    max_ticks = int(round(scenario.timeout_s / dt))
    s_observed = fixed_scale if fixed_scale is not None else engine.scaling.s_intent
    complete = False

    for k in range(max_ticks):
        t = k * dt
        while schedule and schedule[0].t <= t:
            update = schedule.popleft()
            engine.queue_params(update.theta_norm)
            records.append({"event": "params", "t": t, "v": list(update.theta_norm)})
        pose, label_true = operator.step(world, engine.follower.position[:2], s_observed, t)
        res = engine.step(t, pose.position, pose.clutch)
        world.update(res.follower[:2])
        records.append(
            {
                "t": t,
                "leader": [float(v) for v in res.leader],
                "clutch": bool(pose.clutch),
                "follower": [float(v) for v in res.follower],
                "s": float(res.s_applied),
                "label_pred": res.intent.label if res.intent is not None else None,
                "label_true": label_true,
            }
        )
        if res.retrained:
            records.append({"event": "retrain", "t": t, "trained": list(res.retrained)})
        s_observed = res.s_applied
        if world.complete:
            complete = True
            break

    records.append({"event": "end", "t": records[-1].get("t", 0.0), "complete": complete})
    return compute_metrics(records)
