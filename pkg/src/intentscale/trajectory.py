"""Leader command stream, sliding window, clutch state machine, follower law.

The follower integrates scaled per-tick leader deltas rather than scaled
absolute positions: the scale varies over time, and applying it to
absolute positions would make the follower jump whenever the scale
changes. Motion indexing falls out of the clutch phases: deltas are only
applied while clutched, so re-centering the leader moves nothing.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import NonMonotonicTimestampError


def _vec3(value) -> np.ndarray:
    v = np.asarray(value, dtype=float).reshape(3)
    return v


@dataclass(frozen=True)
class PoseSample:
    """One timestamped leader end-effector reading with its clutch flag."""

    t: float
    position: np.ndarray
    clutch: bool

    def __post_init__(self):
        object.__setattr__(self, "position", _vec3(self.position))
        if not np.isfinite(self.position).all():
            raise ValueError(f"non-finite position at t={self.t}")


class TrajectoryWindow:
    """Fixed-capacity window over the current clutched segment.

    Eviction is strictly oldest-first; the engine clears the window on
    every clutch press so features never mix segments.
    """

    def __init__(self, n_window: int = 100):
        if n_window < 2:
            raise ValueError(f"n_window must be >= 2, got {n_window}")
        self.n_window = n_window
        self._samples: deque[PoseSample] = deque(maxlen=n_window)

    def __len__(self) -> int:
        return len(self._samples)

    def __iter__(self):
        return iter(self._samples)

    @property
    def first(self) -> PoseSample:
        return self._samples[0]

    @property
    def last(self) -> PoseSample:
        return self._samples[-1]

    def samples(self) -> tuple[PoseSample, ...]:
        return tuple(self._samples)

    def push(self, sample: PoseSample) -> "TrajectoryWindow":
        """Append a sample; timestamps must be strictly increasing."""
        if self._samples and sample.t <= self._samples[-1].t:
            raise NonMonotonicTimestampError(
                f"sample t={sample.t} not after last t={self._samples[-1].t}"
            )
        self._samples.append(sample)
        return self

    def clear(self) -> None:
        self._samples.clear()


class ClutchPhase(enum.Enum):
    UNCLUTCHED = "unclutched"
    CLUTCHED = "clutched"


class ClutchEvent(enum.Enum):
    NONE = "none"
    PRESSED = "pressed"
    RELEASED = "released"


@dataclass(frozen=True)
class ClutchState:
    """Clutch phase plus the anchors captured at the latest press."""

    phase: ClutchPhase = ClutchPhase.UNCLUTCHED
    leader_anchor: np.ndarray | None = None
    follower_anchor: np.ndarray | None = None
    clutch_count: int = 0


def clutch_transition(
    state: ClutchState, pressed: bool, leader, follower
) -> tuple[ClutchState, ClutchEvent]:
    """Advance the clutch state machine; same-state inputs are no-ops."""
    if pressed and state.phase is ClutchPhase.UNCLUTCHED:
        new = ClutchState(
            phase=ClutchPhase.CLUTCHED,
            leader_anchor=_vec3(leader),
            follower_anchor=_vec3(follower),
            clutch_count=state.clutch_count + 1,
        )
        return new, ClutchEvent.PRESSED
    if not pressed and state.phase is ClutchPhase.CLUTCHED:
        new = ClutchState(
            phase=ClutchPhase.UNCLUTCHED,
            leader_anchor=None,
            follower_anchor=None,
            clutch_count=state.clutch_count,
        )
        return new, ClutchEvent.RELEASED
    return state, ClutchEvent.NONE


@dataclass(frozen=True)
class FollowerState:
    """Follower end-effector plus a rigid tool-tip point ahead of it."""

    position: np.ndarray
    tool_tip: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", _vec3(self.position))
        object.__setattr__(self, "tool_tip", _vec3(self.tool_tip))
        if float(np.linalg.norm(self.tool_tip - self.position)) == 0.0:
            raise ValueError("tool_tip must not coincide with position")

    @property
    def tool_dir(self) -> np.ndarray:
        axis = self.tool_tip - self.position
        return axis / np.linalg.norm(axis)


def integrate_follower(
    fs: FollowerState, leader_delta, s_intent: float, phase: ClutchPhase
) -> FollowerState:
    """Apply one scaled leader delta; no-op while unclutched."""
    if s_intent <= 0.0:
        raise ValueError(f"scale must be positive, got {s_intent}")
    delta = _vec3(leader_delta)
    if not np.isfinite(delta).all():
        raise ValueError("non-finite leader delta")
    if phase is not ClutchPhase.CLUTCHED:
        return fs
    shift = s_intent * delta
    return FollowerState(position=fs.position + shift, tool_tip=fs.tool_tip + shift)
