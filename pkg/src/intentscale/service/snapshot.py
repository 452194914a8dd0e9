"""Model snapshots: exact JSON persistence of the trained bank + params.

Floats survive the JSON round trip exactly (shortest-repr encoding), so
a reloaded model reproduces membership values bit-identically.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..adaptation import ControllerParams
from ..errors import SnapshotError, SnapshotVersionError
from ..fcm import FEATURE_KINDS, FcmConfig, FcmModel, ModelBank

SNAPSHOT_VERSION = 1


def _model_to_dict(model: FcmModel) -> dict:
    return {
        "centroids": list(model.centroids),
        "labels": list(model.label_of_cluster),
        "feature_kind": model.feature_kind,
        "trained_on": model.trained_on,
        "iterations": model.iterations,
        "converged": model.converged,
        "config": {
            "m": model.config.m,
            "max_iter": model.config.max_iter,
            "tol": model.config.tol,
            "seed": model.config.seed,
        },
    }


def _model_from_dict(doc: dict) -> FcmModel:
    cfg = doc["config"]
    return FcmModel(
        centroids=tuple(doc["centroids"]),
        feature_kind=doc["feature_kind"],
        config=FcmConfig(
            m=cfg["m"], max_iter=cfg["max_iter"], tol=cfg["tol"], seed=cfg["seed"]
        ),
        trained_on=doc["trained_on"],
        iterations=doc.get("iterations", 0),
        converged=doc.get("converged", True),
        label_of_cluster=tuple(doc["labels"]),
    )


def save_snapshot(path, bank: ModelBank, params: ControllerParams) -> None:
    """Persist a fully trained bank; refuses partial banks."""
    if not bank.trained:
        raise ValueError("snapshot requires all three models trained and labeled")
    doc = {
        "format_version": SNAPSHOT_VERSION,
        "models": {kind: _model_to_dict(bank.get(kind)) for kind in FEATURE_KINDS},
        "params": {
            "rho": params.rho,
            "s_fine": params.s_fine,
            "s_coarse": params.s_coarse,
            "theta_min": list(params.theta_min),
            "theta_max": list(params.theta_max),
        },
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_snapshot(path) -> tuple[ModelBank, ControllerParams]:
    """Restore a bank + params; membership outputs match the originals exactly."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SnapshotError(f"snapshot is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SnapshotError("snapshot is not a JSON object")
    version = doc.get("format_version")
    if version != SNAPSHOT_VERSION:
        raise SnapshotVersionError(
            f"unsupported snapshot format_version {version!r}, expected {SNAPSHOT_VERSION}"
        )
    try:
        bank = ModelBank()
        for kind in FEATURE_KINDS:
            bank = bank.with_model(kind, _model_from_dict(doc["models"][kind]))
        p = doc["params"]
        params = ControllerParams(
            rho=p["rho"],
            s_fine=p["s_fine"],
            s_coarse=p["s_coarse"],
            theta_min=tuple(p["theta_min"]),
            theta_max=tuple(p["theta_max"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SnapshotError(f"snapshot structure invalid: {exc}") from exc
    return bank, params
