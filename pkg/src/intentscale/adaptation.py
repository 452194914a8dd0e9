"""Mutual adaptation: feature buffering, retraining, user parameters.

The recognizer side: every clutched tick's feature vector lands in a
ring buffer, and when the clutch is released each per-feature model is
retrained on the most recent ``n_retrain`` buffered samples. A feature
whose recent data is too small or degenerate keeps its old model.

The user side: the interface hands over a normalized triple which is
denormalized component-wise into (rho, s_fine, s_coarse) within fixed
bounds, rejected if it would put the fine scale above the coarse one.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousLabelError,
    DegenerateDataError,
    InsufficientDataError,
    ParamConstraintError,
    ParamRangeError,
)
from .fcm import COARSE, FEATURE_KINDS, FINE, FcmConfig, ModelBank, assign_semantic_labels, fcm_train
from .features import FeatureVector

log = logging.getLogger(__name__)

DEFAULT_THETA_MIN = (0.01, 0.2, 1.0)
DEFAULT_THETA_MAX = (0.5, 1.5, 5.0)
MIN_RETRAIN_SAMPLES = 4

# A retrain whose centroid separation collapses below this fraction of the
# existing model's separation is treated as structureless (the recent buffer
# spans a single motion regime) and skipped, like the degenerate-data case.
MIN_SEPARATION_RATIO = 0.1


@dataclass(frozen=True)
class ControllerParams:
    """User-tunable triple (rho, s_fine, s_coarse) with its bounds."""

    rho: float = 0.05
    s_fine: float = 1.0
    s_coarse: float = 3.0
    theta_min: tuple[float, float, float] = DEFAULT_THETA_MIN
    theta_max: tuple[float, float, float] = DEFAULT_THETA_MAX

    def __post_init__(self):
        values = (self.rho, self.s_fine, self.s_coarse)
        for name, v, lo, hi in zip(("rho", "s_fine", "s_coarse"), values, self.theta_min, self.theta_max):
            if not lo <= v <= hi:
                raise ParamConstraintError(f"{name}={v} outside bounds [{lo}, {hi}]")
        if self.s_fine > self.s_coarse:
            raise ParamConstraintError(
                f"s_fine={self.s_fine} must not exceed s_coarse={self.s_coarse}"
            )

    def scale_for(self, label: str) -> float:
        if label == COARSE:
            return self.s_coarse
        if label == FINE:
            return self.s_fine
        raise ValueError(f"unknown label {label!r}")

    def normalized(self) -> tuple[float, float, float]:
        """Inverse of denormalize_params (for echoing back to the interface)."""
        values = (self.rho, self.s_fine, self.s_coarse)
        return tuple(
            (v - lo) / (hi - lo) if hi > lo else 0.0
            for v, lo, hi in zip(values, self.theta_min, self.theta_max)
        )


class FeatureBuffer:
    """Time-ordered ring buffer of feature vectors (oldest-first eviction)."""

    def __init__(self, capacity: int = 2000):
        if capacity < MIN_RETRAIN_SAMPLES:
            raise ValueError(f"capacity must be >= {MIN_RETRAIN_SAMPLES}")
        self.capacity = capacity
        self._entries: deque[FeatureVector] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def record(self, fv: FeatureVector) -> "FeatureBuffer":
        self._entries.append(fv)
        return self

    def last_n(self, n: int) -> list[FeatureVector]:
        if n >= len(self._entries):
            return list(self._entries)
        return list(self._entries)[-n:]

    def component_values(self, kind: str, n: int) -> np.ndarray:
        return np.array([fv.component(kind) for fv in self.last_n(n)])


def retrain_on_unclutch(
    buf: FeatureBuffer,
    models: ModelBank,
    n_retrain: int,
    cfg: FcmConfig,
) -> tuple[ModelBank, list[str]]:
    """Retrain each feature model on the buffer's most recent samples.

    Returns the (possibly partially) updated bank and the list of feature
    kinds that actually got a new model. Skips are logged, never raised:
    the control loop must survive a sparse or degenerate buffer.
    """
    updated = models
    retrained: list[str] = []
    for kind in FEATURE_KINDS:
        values = buf.component_values(kind, n_retrain)
        try:
            model = assign_semantic_labels(fcm_train(values, cfg, kind))
        except (InsufficientDataError, DegenerateDataError, AmbiguousLabelError) as exc:
            log.debug("retrain skipped for %s: %s", kind, exc)
            continue
        previous = models.get(kind)
        if previous is not None and previous.labeled:
            old_sep = abs(previous.centroids[1] - previous.centroids[0])
            new_sep = abs(model.centroids[1] - model.centroids[0])
            if new_sep < MIN_SEPARATION_RATIO * old_sep:
                log.debug(
                    "retrain skipped for %s: separation collapsed %g -> %g",
                    kind, old_sep, new_sep,
                )
                continue
        updated = updated.with_model(kind, model)
        retrained.append(kind)
    return updated, retrained


def denormalize_params(
    theta_norm,
    theta_min: tuple[float, float, float] = DEFAULT_THETA_MIN,
    theta_max: tuple[float, float, float] = DEFAULT_THETA_MAX,
) -> ControllerParams:
    """Map a normalized triple in [0,1]^3 onto the parameter bounds.

    theta = theta_norm * (theta_max - theta_min) + theta_min, applied
    component-wise in the order (rho, s_fine, s_coarse).
    """
    values = tuple(float(v) for v in theta_norm)
    if len(values) != 3:
        raise ParamRangeError(f"expected 3 components, got {len(values)}")
    for i, v in enumerate(values):
        if not 0.0 <= v <= 1.0:
            raise ParamRangeError(f"component {i} = {v} outside [0, 1]")
    rho, s_fine, s_coarse = (
        v * (hi - lo) + lo for v, lo, hi in zip(values, theta_min, theta_max)
    )
    return ControllerParams(
        rho=rho,
        s_fine=s_fine,
        s_coarse=s_coarse,
        theta_min=tuple(theta_min),
        theta_max=tuple(theta_max),
    )
