"""Per-tick motion features: speed, alignness, displacement.

Speed is the magnitude of a smoothed finite-difference velocity (mean of
the last ``k_velocity`` per-step differences; one-step differences at
100 Hz are noise-dominated). Alignness is |cos| between the leader
velocity direction and the follower tool axis, held at its previous
value when the leader is essentially at rest. Displacement is the
magnitude of the net displacement over the window, not the summed path:
back-and-forth adjustments cancel, which is exactly what separates fine
from coarse motion.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InsufficientDataError
from .trajectory import TrajectoryWindow

K_VELOCITY = 5
EPS_VELOCITY = 1e-4  # m/s; below this the alignness hold rule applies
INITIAL_ALIGNNESS = 0.5


@dataclass(frozen=True)
class KinematicEstimate:
    """Velocity estimate plus the state the alignness hold rule needs."""

    velocity: np.ndarray
    tool_dir: np.ndarray
    last_alignness: float = INITIAL_ALIGNNESS

    @classmethod
    def initial(cls, tool_dir) -> "KinematicEstimate":
        axis = np.asarray(tool_dir, dtype=float).reshape(3)
        return cls(velocity=np.zeros(3), tool_dir=axis / np.linalg.norm(axis))

    def advanced(self, velocity: np.ndarray, tool_dir: np.ndarray, alignness: float):
        return replace(
            self, velocity=velocity, tool_dir=tool_dir, last_alignness=alignness
        )


@dataclass(frozen=True)
class FeatureVector:
    """The (speed, alignness, displacement) triple at time t."""

    speed: float
    alignness: float
    displacement: float
    t: float

    def component(self, kind: str) -> float:
        return getattr(self, kind)


def estimate_velocity(window: TrajectoryWindow, k_velocity: int = K_VELOCITY) -> np.ndarray:
    """Mean of the last ``k_velocity`` per-step finite differences."""
    n = len(window)
    if n < 2:
        raise InsufficientDataError(f"velocity needs >= 2 samples, got {n}")
    samples = window.samples()
    steps = min(k_velocity, n - 1)
    total = np.zeros(3)
    for a, b in zip(samples[-steps - 1 : -1], samples[-steps:]):
        total += (b.position - a.position) / (b.t - a.t)
    return total / steps


def compute_alignness(
    v: np.ndarray, tool_dir: np.ndarray, last: float, eps_velocity: float = EPS_VELOCITY
) -> float:
    """|cos| between velocity and tool axis; holds ``last`` when nearly at rest."""
    speed = float(np.linalg.norm(v))
    if speed < eps_velocity:
        return last
    return float(np.clip(abs(float(np.dot(v, tool_dir))) / speed, 0.0, 1.0))


def extract_features(
    window: TrajectoryWindow,
    kin: KinematicEstimate,
    k_velocity: int = K_VELOCITY,
    eps_velocity: float = EPS_VELOCITY,
) -> FeatureVector:
    """Features of the current window given the latest kinematic state."""
    v = estimate_velocity(window, k_velocity)
    speed = float(np.linalg.norm(v))
    alignness = compute_alignness(v, kin.tool_dir, kin.last_alignness, eps_velocity)
    displacement = float(np.linalg.norm(window.last.position - window.first.position))
    return FeatureVector(
        speed=speed, alignness=alignness, displacement=displacement, t=window.last.t
    )
