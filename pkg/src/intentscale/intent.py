"""Per-tick intent fusion and scale smoothing.

Each tick while clutched: extract features, query the three per-feature
models, average the membership pairs, pick the label by argmax (exact
ties keep the previous label), map the label to its scale, and smooth
with a discrete low-pass filter

    s_intent = (1 - rho) * s_prev + rho * s_j

so the applied scale is always a convex combination of where it was and
where the classifier wants it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .adaptation import ControllerParams
from .fcm import COARSE, FINE, MembershipPair, ModelBank, fcm_membership
from .features import FeatureVector, KinematicEstimate, extract_features
from .trajectory import TrajectoryWindow

TIE_EPS = 1e-12


@dataclass(frozen=True)
class ScalingState:
    """LPF state carried across ticks (and across clutch releases)."""

    s_prev: float
    s_intent: float
    last_label: str
    rho: float

    def __post_init__(self):
        if not 0.0 < self.rho <= 1.0:
            raise ValueError(f"rho must be in (0, 1], got {self.rho}")
        if self.s_prev <= 0.0 or self.s_intent <= 0.0:
            raise ValueError("scales must be positive")

    @classmethod
    def initial(cls, params: ControllerParams) -> "ScalingState":
        # under-scaling is the safe cold-start mode for precision work
        return cls(
            s_prev=params.s_fine,
            s_intent=params.s_fine,
            last_label=FINE,
            rho=params.rho,
        )


@dataclass(frozen=True)
class IntentOutput:
    """One tick's classification and smoothed scale."""

    fused: MembershipPair
    label: str
    s_target: float
    s_intent: float
    degraded: bool = False
    features: FeatureVector | None = None


def fuse_and_select(
    pairs: tuple[MembershipPair, MembershipPair, MembershipPair], last_label: str
) -> tuple[MembershipPair, str]:
    """Component-wise mean of the three pairs, then argmax with tie hysteresis."""
    u_coarse = sum(p.u_coarse for p in pairs) / len(pairs)
    u_fine = sum(p.u_fine for p in pairs) / len(pairs)
    fused = MembershipPair(u_coarse=u_coarse, u_fine=u_fine)
    if abs(u_coarse - u_fine) < TIE_EPS:
        return fused, last_label
    return fused, (COARSE if u_coarse > u_fine else FINE)


def lpf_step(state: ScalingState, s_j: float) -> ScalingState:
    """One discrete low-pass step toward the selected scale."""
    if s_j <= 0.0:
        raise ValueError(f"target scale must be positive, got {s_j}")
    s_intent = (1.0 - state.rho) * state.s_prev + state.rho * s_j
    return replace(state, s_prev=s_intent, s_intent=s_intent)


def tick(
    window: TrajectoryWindow,
    models: ModelBank,
    params: ControllerParams,
    state: ScalingState,
    kin: KinematicEstimate,
    features: FeatureVector | None = None,
) -> tuple[IntentOutput, ScalingState]:
    """Full clutched-phase pipeline for one tick.

    With fewer than two window samples the tick is a passthrough
    (s_intent = s_prev, no filter update). With an untrained bank it
    degrades to the fine scale, smoothed as usual, and flags the output.
    """
    if len(window) < 2:
        out = IntentOutput(
            fused=MembershipPair(0.5, 0.5),
            label=state.last_label,
            s_target=params.scale_for(state.last_label),
            s_intent=state.s_prev,
            degraded=not models.trained,
        )
        return out, state

    if not models.trained:
        new_state = lpf_step(state, params.s_fine)
        new_state = replace(new_state, last_label=FINE)
        out = IntentOutput(
            fused=MembershipPair(0.5, 0.5),
            label=FINE,
            s_target=params.s_fine,
            s_intent=new_state.s_intent,
            degraded=True,
            features=features,
        )
        return out, new_state

    if features is None:
        features = extract_features(window, kin)
    pairs = (
        fcm_membership(models.speed, features.speed),
        fcm_membership(models.alignness, features.alignness),
        fcm_membership(models.displacement, features.displacement),
    )
    fused, label = fuse_and_select(pairs, state.last_label)
    s_j = params.scale_for(label)
    new_state = lpf_step(state, s_j)
    new_state = replace(new_state, last_label=label)
    out = IntentOutput(
        fused=fused,
        label=label,
        s_target=s_j,
        s_intent=new_state.s_intent,
        features=features,
    )
    return out, new_state
