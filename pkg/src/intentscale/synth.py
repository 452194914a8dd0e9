"""Synthetic leader-motion generators with known ground-truth labels.

These generators are the independent oracle for the intent pipeline:
they produce clutched segments whose regime (coarse transport vs. fine
alignment) is known by construction, so classifier output can be scored
against truth. Coarse segments sweep laterally across the tool axis at
transport speed with a wandering heading; fine segments oscillate along
the tool axis at low speed with a small drift, the way a precision
approach looks in leader space.
"""

from __future__ import annotations

import numpy as np

from .fcm import FcmConfig, ModelBank, assign_semantic_labels, fcm_train
from .features import FeatureVector, KinematicEstimate, extract_features
from .trajectory import PoseSample, TrajectoryWindow

TOOL_AXIS = np.array([1.0, 0.0, 0.0])

COARSE_SPEED = 0.15  # m/s
FINE_SPEED = 0.02  # m/s along-axis oscillation
FINE_DRIFT = 0.006  # m/s net approach drift


def _rot_xy(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def coarse_window(
    rng: np.random.Generator,
    n: int = 100,
    dt: float = 0.01,
    speed: float = COARSE_SPEED,
    wander_deg: float = 25.0,
) -> TrajectoryWindow:
    """Transport-style segment: fast, direction-varying, large net drift.

    The base heading stays in the lateral band (30..150 degrees off the
    tool axis), matching how gross transfers cross the tool's working
    direction rather than running along it.
    """
    base = np.deg2rad(rng.uniform(30.0, 150.0)) * rng.choice([-1.0, 1.0])
    amp = np.deg2rad(wander_deg)
    period = rng.uniform(0.8, 1.4)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    window = TrajectoryWindow(n_window=n)
    pos = np.zeros(3)
    for k in range(n):
        t = k * dt
        heading = base + amp * np.sin(2.0 * np.pi * t / period + phase)
        direction = _rot_xy(heading) @ TOOL_AXIS
        if k > 0:
            pos = pos + speed * dt * direction
        window.push(PoseSample(t=t, position=pos.copy(), clutch=True))
    return window


def fine_window(
    rng: np.random.Generator,
    n: int = 100,
    dt: float = 0.01,
    speed: float = FINE_SPEED,
    drift: float = FINE_DRIFT,
    osc_period: float = 0.9,
) -> TrajectoryWindow:
    """Alignment-style segment: slow along-axis oscillation, small net drift."""
    phase = rng.uniform(0.0, 2.0 * np.pi)
    drift_angle = rng.uniform(0.0, 2.0 * np.pi)
    drift_dir = _rot_xy(drift_angle) @ TOOL_AXIS
    window = TrajectoryWindow(n_window=n)
    pos = np.zeros(3)
    for k in range(n):
        t = k * dt
        osc = np.sign(np.sin(2.0 * np.pi * t / osc_period + phase)) or 1.0
        v = speed * osc * TOOL_AXIS + drift * drift_dir
        if k > 0:
            pos = pos + v * dt
        window.push(PoseSample(t=t, position=pos.copy(), clutch=True))
    return window


def window_features(window: TrajectoryWindow) -> FeatureVector:
    """Full-window features with a fresh kinematic state (tool along x)."""
    return extract_features(window, KinematicEstimate.initial(TOOL_AXIS))


def segment_features(window: TrajectoryWindow, min_len: int = 2) -> list[FeatureVector]:
    """Per-tick features replayed over a segment, as the live loop sees them."""
    out: list[FeatureVector] = []
    kin = KinematicEstimate.initial(TOOL_AXIS)
    partial = TrajectoryWindow(n_window=window.n_window)
    for sample in window:
        partial.push(sample)
        if len(partial) >= min_len:
            fv = extract_features(partial, kin)
            kin = kin.advanced(kin.velocity, kin.tool_dir, fv.alignness)
            out.append(fv)
    return out


def make_model_bank(
    rng: np.random.Generator,
    n_windows: int = 40,
    cfg: FcmConfig = FcmConfig(),
    coarse_speed: float = COARSE_SPEED,
    fine_speed: float = FINE_SPEED,
) -> ModelBank:
    """Train a labeled bank on features from generated segments of both kinds."""
    feats: list[FeatureVector] = []
    for _ in range(n_windows):
        feats.extend(segment_features(coarse_window(rng, speed=coarse_speed)))
        feats.extend(segment_features(fine_window(rng, speed=fine_speed)))
    bank = ModelBank()
    for kind in ("speed", "alignness", "displacement"):
        values = [f.component(kind) for f in feats]
        bank = bank.with_model(kind, assign_semantic_labels(fcm_train(values, cfg, kind)))
    return bank
