"""Deterministic replay of logged sessions.

A session log carries the full input stream (leader poses, clutch flags,
parameter updates) plus the engine configuration in its header, so
feeding it back through a fresh engine must reproduce the logged scale
sequence bit for bit. Retraining re-derives itself from the stream.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import EngineConfig, SharedControlEngine
from ..errors import LogSchemaError
from ..fcm import ModelBank
from ..sim.runner import parse_mode


@dataclass(frozen=True)
class ReplayResult:
    n_ticks: int
    matched: bool
    first_mismatch: int | None
    logged_s: tuple[float, ...]
    replayed_s: tuple[float, ...]


def replay_records(records: list[dict], models: ModelBank | None = None) -> ReplayResult:
    """Re-run a log's input stream and compare scale sequences exactly."""
    header = next((r for r in records if r.get("event") == "header"), None)
    if header is None:
        raise LogSchemaError(1, "event", "log has no header record")
    fixed_scale, _ = parse_mode(header.get("mode", "adaptive"))
    config = EngineConfig.from_dict(header.get("engine", {}))
    engine = SharedControlEngine(config, fixed_scale=fixed_scale, models=models)

    logged: list[float] = []
    replayed: list[float] = []
    for record in records:
        event = record.get("event")
        if event == "params":
            engine.queue_params(tuple(record["v"]))
            continue
        if event is not None:
            continue
        res = engine.step(record["t"], record["leader"], record["clutch"])
        logged.append(float(record["s"]))
        replayed.append(float(res.s_applied))

    first_mismatch = next(
        (i for i, (a, b) in enumerate(zip(logged, replayed)) if a != b), None
    )
    return ReplayResult(
        n_ticks=len(logged),
        matched=first_mismatch is None,
        first_mismatch=first_mismatch,
        logged_s=tuple(logged),
        replayed_s=tuple(replayed),
    )
