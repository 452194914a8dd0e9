"""Scenario files: world layout, operator behavior, engine settings.

A scenario is a JSON document; built-ins ship with the package and can
be referenced by bare name (``pegtransfer-4ring``, ``transport-leg``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from ..engine import EngineConfig
from .operator import OperatorParams, ScriptedOperator
from .world import Peg, PegWorld, Ring, RingSize, RingState

BUILTIN_SCENARIOS = ("pegtransfer-4ring", "transport-leg")


@dataclass(frozen=True)
class ParamUpdate:
    t: float
    theta_norm: tuple[float, float, float]


@dataclass(frozen=True)
class Scenario:
    name: str
    seed: int
    timeout_s: float
    workspace_radius: float
    world_spec: dict
    operator: OperatorParams
    engine: EngineConfig
    param_schedule: tuple[ParamUpdate, ...] = ()

    def build_world(self) -> PegWorld:
        spec = self.world_spec
        pegs = [
            Peg(position=np.asarray(p["pos"], dtype=float), color=p["color"])
            for p in spec["pegs"]
        ]
        rings = [
            Ring(
                position=np.asarray(r["pos"], dtype=float),
                color=r["color"],
                size=RingSize(r["size"]),
                radius=float(r["radius"]),
                state=RingState(r.get("state", "free")),
            )
            for r in spec["rings"]
        ]
        bounds = spec.get("bounds", [[-1.0, -1.0], [1.0, 1.0]])
        return PegWorld(
            pegs=pegs,
            rings=rings,
            bounds=(tuple(bounds[0]), tuple(bounds[1])),
            capture_override=spec.get("capture_override"),
        )

    def build_operator(self, seed: int | None = None) -> ScriptedOperator:
        return ScriptedOperator(
            params=self.operator,
            workspace_radius=self.workspace_radius,
            seed=self.seed if seed is None else seed,
            dt=self.engine.dt,
        )


def scenario_from_dict(doc: dict, name_hint: str = "unnamed") -> Scenario:
    schedule = tuple(
        ParamUpdate(t=float(u["t"]), theta_norm=tuple(float(v) for v in u["v"]))
        for u in doc.get("param_schedule", [])
    )
    return Scenario(
        name=doc.get("name", name_hint),
        seed=int(doc.get("seed", 0)),
        timeout_s=float(doc.get("timeout_s", 300.0)),
        workspace_radius=float(doc.get("leader", {}).get("workspace_radius", 0.1)),
        world_spec=doc["world"],
        operator=OperatorParams.from_dict(doc.get("operator", {})),
        engine=EngineConfig.from_dict(doc.get("engine", {})),
        param_schedule=schedule,
    )


def load_scenario(path_or_name: str | Path) -> Scenario:
    """Load a scenario from a file path or by built-in name."""
    name = str(path_or_name)
    if name in BUILTIN_SCENARIOS:
        ref = resources.files("intentscale.scenarios") / f"{name.replace('-', '_')}.json"
        doc = json.loads(ref.read_text(encoding="utf-8"))
        return scenario_from_dict(doc, name_hint=name)
    path = Path(path_or_name)
    doc = json.loads(path.read_text(encoding="utf-8"))
    return scenario_from_dict(doc, name_hint=path.stem)
