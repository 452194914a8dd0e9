"""Deterministic scripted operator with ground-truth motion labels.

Stands in for the human: it steers the leader toward the current task
goal, and because it decides its own regime each tick, every clutched
sample comes with a ground-truth coarse/fine label for scoring the
recognizer against.

Behavior model (leader space, tool axis along +x):

* Transport (coarse): full-speed motion toward the goal with a slowly
  sweeping heading wander, the way a gross transfer arcs instead of
  tracking a straight line.
* Align (fine): deliberate low-speed back-and-forth along the tool axis
  plus a small closing drift toward the goal. Deliberate speeds shrink
  with the observed motion scale (the operator watches the follower and
  slows the hand when its motion is amplified), while the tremor term
  keeps its leader-space amplitude: involuntary shake does not adapt,
  which is exactly why an over-large scale amplifies jitter.
* Recenter (unclutched): when the leader hits the workspace boundary it
  releases the clutch, glides back to the workspace center over a fixed
  number of ticks, and re-clutches.

All randomness is a handful of phase offsets drawn once from the seed,
so a (scenario, seed) pair replays bit-identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fcm import COARSE, FINE
from ..trajectory import PoseSample
from .world import PegWorld

TOOL_AXIS_XY = np.array([1.0, 0.0])


@dataclass(frozen=True)
class OperatorParams:
    v_coarse: float = 0.15  # m/s leader transport speed
    v_fine: float = 0.02  # m/s deliberate along-axis oscillation (at scale 1)
    v_close: float = 0.012  # m/s follower-space closing rate during alignment
    v_tremor: float = 0.012  # m/s involuntary leader-space tremor amplitude
    wander_deg: float = 25.0  # primary heading wander amplitude
    wander2_deg: float = 8.0  # secondary wander amplitude
    wander_period_s: float = 1.1
    wander2_period_s: float = 0.31
    osc_period_s: float = 0.9
    tremor_hz: tuple[float, float] = (9.0, 11.3)
    align_enter_factor: float = 5.0  # align when within this x capture radius
    recenter_ticks: int = 25

    @classmethod
    def from_dict(cls, d: dict) -> "OperatorParams":
        known = {f: d[f] for f in d if f in cls.__dataclass_fields__}
        if "tremor_hz" in known:
            known["tremor_hz"] = tuple(known["tremor_hz"])
        return cls(**known)


def _rot(v: np.ndarray, angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


class ScriptedOperator:
    def __init__(
        self,
        params: OperatorParams,
        workspace_radius: float,
        seed: int,
        dt: float = 0.01,
    ):
        self.params = params
        self.workspace_radius = workspace_radius
        self.dt = dt
        rng = np.random.default_rng(seed)
        self._phases = rng.uniform(0.0, 2.0 * np.pi, size=5)
        self.leader = np.zeros(2)
        self._recenter_left = 0
        self._recenter_step = np.zeros(2)
        # press before moving: the first clutched sample of every stroke is
        # emitted at rest so the stroke's full reach starts from the anchor
        self._press_pending = True

    @property
    def recentering(self) -> bool:
        return self._recenter_left > 0

    def _wander(self, t: float) -> float:
        p = self.params
        return np.deg2rad(p.wander_deg) * np.sin(
            2.0 * np.pi * t / p.wander_period_s + self._phases[0]
        ) + np.deg2rad(p.wander2_deg) * np.sin(
            2.0 * np.pi * t / p.wander2_period_s + self._phases[1]
        )

    def _tremor(self, t: float) -> float:
        f1, f2 = self.params.tremor_hz
        return np.sin(2.0 * np.pi * f1 * t + self._phases[2]) + 0.7 * np.sin(
            2.0 * np.pi * f2 * t + self._phases[3]
        )

    def _begin_recenter(self) -> None:
        k = self.params.recenter_ticks
        self._recenter_left = k
        self._recenter_step = -self.leader / k

    def _clamp_to_workspace(self, step: np.ndarray) -> tuple[np.ndarray, bool]:
        """Walk ``step`` from the current leader pose, stopping exactly on
        the workspace circle if the step would cross it."""
        new = self.leader + step
        r = self.workspace_radius
        if float(new @ new) < r * r:
            return new, False
        a = float(step @ step)
        if a == 0.0:
            return self.leader.copy(), True
        b = 2.0 * float(self.leader @ step)
        c = float(self.leader @ self.leader) - r * r
        disc = max(b * b - 4.0 * a * c, 0.0)
        alpha = (-b + np.sqrt(disc)) / (2.0 * a)
        alpha = min(max(alpha, 0.0), 1.0)
        return self.leader + alpha * step, True

    def step(
        self, world: PegWorld, follower_xy: np.ndarray, s_observed: float, t: float
    ) -> tuple[PoseSample, str | None]:
        """Advance one tick; returns the emitted pose and the truth label
        (None while unclutched)."""
        p = self.params

        if self._recenter_left > 0:
            self._recenter_left -= 1
            if self._recenter_left == 0:
                self.leader = np.zeros(2)
                self._press_pending = True
            else:
                self.leader = self.leader + self._recenter_step
            return self._pose(t, clutch=False), None

        goal = world.next_goal()
        if goal is None:
            return self._pose(t, clutch=True), None
        _, target, ring = goal
        err = target - np.asarray(follower_xy, dtype=float)[:2]
        dist = float(np.linalg.norm(err))
        direction = err / dist if dist > 1e-12 else TOOL_AXIS_XY.copy()
        enter = p.align_enter_factor * world.capture_radius(ring)

        if self._press_pending:
            self._press_pending = False
            return self._pose(t, clutch=True), COARSE if dist > enter else FINE

        if dist > enter:
            heading = _rot(direction, self._wander(t))
            # decelerate onto the goal: never command more follower travel
            # than the remaining distance (scale-aware landing step)
            step_len = min(p.v_coarse * self.dt, dist / max(s_observed, 1e-6))
            new_leader, hit_boundary = self._clamp_to_workspace(step_len * heading)
            self.leader = new_leader
            if hit_boundary:
                self._begin_recenter()
            return self._pose(t, clutch=True), COARSE
        s = max(s_observed, 1e-6)
        osc = np.sign(np.sin(2.0 * np.pi * t / p.osc_period_s + self._phases[4])) or 1.0
        along = (p.v_fine * osc) / s + p.v_tremor * self._tremor(t)
        closing = min(p.v_close / s, dist / s / self.dt)
        velocity = along * TOOL_AXIS_XY + closing * direction
        new_leader, hit_boundary = self._clamp_to_workspace(velocity * self.dt)
        self.leader = new_leader
        if hit_boundary:
            self._begin_recenter()
        return self._pose(t, clutch=True), FINE

    def _pose(self, t: float, clutch: bool) -> PoseSample:
        return PoseSample(
            t=t, position=np.array([self.leader[0], self.leader[1], 0.0]), clutch=clutch
        )
