"""Single-session shared-control engine.

Owns all mutable state of one teleoperation session and advances it one
tick at a time: clutch transitions, window maintenance, feature
extraction and buffering, intent classification, scale smoothing,
follower integration, and retraining at clutch release. Everything is
driven by the caller's tick loop (headless runner or live server); the
engine itself never touches the wall clock, so identical input streams
reproduce identical output streams.

Parameter updates are queued and applied at the next tick boundary: a
single tick always runs under exactly one parameter set.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .adaptation import (
    ControllerParams,
    FeatureBuffer,
    denormalize_params,
    retrain_on_unclutch,
)
from .fcm import FcmConfig, ModelBank
from .features import KinematicEstimate, estimate_velocity, extract_features
from .intent import IntentOutput, ScalingState, tick as intent_tick
from .trajectory import (
    ClutchEvent,
    ClutchPhase,
    ClutchState,
    FollowerState,
    PoseSample,
    TrajectoryWindow,
    clutch_transition,
    integrate_follower,
)

DT = 0.01  # nominal 100 Hz tick


@dataclass(frozen=True)
class EngineConfig:
    n_window: int = 100
    k_velocity: int = 5
    eps_velocity: float = 1e-4
    n_retrain: int = 500
    buffer_capacity: int = 2000
    fcm: FcmConfig = field(default_factory=FcmConfig)
    params: ControllerParams = field(default_factory=ControllerParams)
    tool_offset: tuple[float, float, float] = (0.05, 0.0, 0.0)
    follower_start: tuple[float, float, float] = (0.0, 0.0, 0.0)
    dt: float = DT

    def to_dict(self) -> dict:
        return {
            "n_window": self.n_window,
            "k_velocity": self.k_velocity,
            "eps_velocity": self.eps_velocity,
            "n_retrain": self.n_retrain,
            "buffer_capacity": self.buffer_capacity,
            "fcm": {
                "m": self.fcm.m,
                "max_iter": self.fcm.max_iter,
                "tol": self.fcm.tol,
                "seed": self.fcm.seed,
            },
            "params": {
                "rho": self.params.rho,
                "s_fine": self.params.s_fine,
                "s_coarse": self.params.s_coarse,
                "theta_min": list(self.params.theta_min),
                "theta_max": list(self.params.theta_max),
            },
            "tool_offset": list(self.tool_offset),
            "follower_start": list(self.follower_start),
            "dt": self.dt,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        fcm = d.get("fcm", {})
        params = d.get("params", {})
        return cls(
            n_window=int(d.get("n_window", 100)),
            k_velocity=int(d.get("k_velocity", 5)),
            eps_velocity=float(d.get("eps_velocity", 1e-4)),
            n_retrain=int(d.get("n_retrain", 500)),
            buffer_capacity=int(d.get("buffer_capacity", 2000)),
            fcm=FcmConfig(
                m=float(fcm.get("m", 2.0)),
                max_iter=int(fcm.get("max_iter", 200)),
                tol=float(fcm.get("tol", 1e-9)),
                seed=int(fcm.get("seed", 0)),
            ),
            params=ControllerParams(
                rho=float(params.get("rho", 0.05)),
                s_fine=float(params.get("s_fine", 1.0)),
                s_coarse=float(params.get("s_coarse", 3.0)),
                theta_min=tuple(params.get("theta_min", (0.01, 0.2, 1.0))),
                theta_max=tuple(params.get("theta_max", (0.5, 1.5, 5.0))),
            ),
            tool_offset=tuple(d.get("tool_offset", (0.05, 0.0, 0.0))),
            follower_start=tuple(d.get("follower_start", (0.0, 0.0, 0.0))),
            dt=float(d.get("dt", DT)),
        )


@dataclass(frozen=True)
class StepResult:
    """What one engine tick produced, for logging and telemetry."""

    t: float
    event: ClutchEvent
    clutched: bool
    s_applied: float
    intent: IntentOutput | None
    leader: np.ndarray
    follower: np.ndarray
    clutch_count: int
    degraded: bool
    retrained: tuple[str, ...] = ()


class SharedControlEngine:
    """One session's state machine; ``fixed_scale=None`` means adaptive."""

    def __init__(
        self,
        config: EngineConfig | None = None,
        fixed_scale: float | None = None,
        models: ModelBank | None = None,
    ):
        self.config = config or EngineConfig()
        if fixed_scale is not None and fixed_scale <= 0:
            raise ValueError(f"fixed scale must be positive, got {fixed_scale}")
        self.fixed_scale = fixed_scale
        self.models = models or ModelBank()
        self.params = self.config.params
        self.window = TrajectoryWindow(self.config.n_window)
        self.clutch = ClutchState()
        start = np.asarray(self.config.follower_start, dtype=float)
        self.follower = FollowerState(
            position=start, tool_tip=start + np.asarray(self.config.tool_offset, float)
        )
        self.kin = KinematicEstimate.initial(self.follower.tool_dir)
        self.scaling = ScalingState.initial(self.params)
        self.buffer = FeatureBuffer(self.config.buffer_capacity)
        self.first_retrain_t: float | None = None
        self._pending_params: ControllerParams | None = None
        self._prev_leader: np.ndarray | None = None

    @property
    def adaptive(self) -> bool:
        return self.fixed_scale is None

    @property
    def degraded(self) -> bool:
        return self.adaptive and not self.models.trained

    def queue_params(self, theta_norm) -> ControllerParams:
        """Validate and stage a normalized parameter triple.

        Raises ParamRangeError / ParamConstraintError on invalid input;
        the current parameters stay in force either way until the next
        tick boundary.
        """
        params = denormalize_params(
            theta_norm, self.params.theta_min, self.params.theta_max
        )
        self._pending_params = params
        return params

    def step(self, t: float, leader_pos, clutch_pressed: bool) -> StepResult:
        """Advance the session by one tick."""
        if self._pending_params is not None:
            self.params = self._pending_params
            self.scaling = replace(self.scaling, rho=self.params.rho)
            self._pending_params = None

        leader = np.asarray(leader_pos, dtype=float).reshape(3)
        self.clutch, event = clutch_transition(
            self.clutch, clutch_pressed, leader, self.follower.position
        )

        retrained: tuple[str, ...] = ()
        if event is ClutchEvent.PRESSED:
            self.window.clear()
            self._prev_leader = leader.copy()
        elif event is ClutchEvent.RELEASED and self.adaptive:
            self.models, done = retrain_on_unclutch(
                self.buffer, self.models, self.config.n_retrain, self.config.fcm
            )
            retrained = tuple(done)
            if retrained and self.first_retrain_t is None:
                self.first_retrain_t = t

        intent_out: IntentOutput | None = None
        s = self.fixed_scale if self.fixed_scale is not None else self.scaling.s_intent

        if self.clutch.phase is ClutchPhase.CLUTCHED:
            self.window.push(PoseSample(t=t, position=leader, clutch=True))
            delta = leader - self._prev_leader
            self._prev_leader = leader.copy()

            if self.adaptive:
                features = None
                if len(self.window) >= 2:
                    features = extract_features(
                        self.window,
                        self.kin,
                        self.config.k_velocity,
                        self.config.eps_velocity,
                    )
                    self.buffer.record(features)
                    self.kin = self.kin.advanced(
                        estimate_velocity(self.window, self.config.k_velocity),
                        self.follower.tool_dir,
                        features.alignness,
                    )
                intent_out, self.scaling = intent_tick(
                    self.window, self.models, self.params, self.scaling, self.kin,
                    features=features,
                )
                s = intent_out.s_intent
            self.follower = integrate_follower(
                self.follower, delta, s, ClutchPhase.CLUTCHED
            )

        return StepResult(
            t=t,
            event=event,
            clutched=self.clutch.phase is ClutchPhase.CLUTCHED,
            s_applied=float(s),
            intent=intent_out,
            leader=leader.copy(),
            follower=self.follower.position.copy(),
            clutch_count=self.clutch.clutch_count,
            degraded=self.degraded,
            retrained=retrained,
        )
