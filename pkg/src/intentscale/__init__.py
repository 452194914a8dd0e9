"""intentscale: adaptive motion scaling for clutched teleoperation.

A real-time shared controller that watches the leader arm's trajectory,
classifies the operator's intended motion regime (coarse transport vs.
fine alignment) with per-feature fuzzy clustering, and smoothly scales
the follower's motion to match. Includes clutch-based motion indexing,
retraining at every clutch release, user-tunable control parameters, a
headless peg-transfer simulation harness with a scripted operator, and
a WebSocket telemetry service for the browser cockpit.
"""

from .adaptation import (
    ControllerParams,
    FeatureBuffer,
    denormalize_params,
    retrain_on_unclutch,
)
from .engine import EngineConfig, SharedControlEngine, StepResult
from .errors import IntentScaleError
from .fcm import (
    COARSE,
    FINE,
    FcmConfig,
    FcmModel,
    MembershipPair,
    ModelBank,
    assign_semantic_labels,
    fcm_membership,
    fcm_objective,
    fcm_train,
)
from .features import (
    FeatureVector,
    KinematicEstimate,
    compute_alignness,
    estimate_velocity,
    extract_features,
)
from .intent import IntentOutput, ScalingState, fuse_and_select, lpf_step, tick
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

__version__ = "0.1.0"

__all__ = [
    "COARSE",
    "FINE",
    "ClutchEvent",
    "ClutchPhase",
    "ClutchState",
    "ControllerParams",
    "EngineConfig",
    "FcmConfig",
    "FcmModel",
    "FeatureBuffer",
    "FeatureVector",
    "FollowerState",
    "IntentOutput",
    "IntentScaleError",
    "KinematicEstimate",
    "MembershipPair",
    "ModelBank",
    "PoseSample",
    "ScalingState",
    "SharedControlEngine",
    "StepResult",
    "TrajectoryWindow",
    "assign_semantic_labels",
    "clutch_transition",
    "compute_alignness",
    "denormalize_params",
    "estimate_velocity",
    "extract_features",
    "fcm_membership",
    "fcm_objective",
    "fcm_train",
    "fuse_and_select",
    "integrate_follower",
    "lpf_step",
    "retrain_on_unclutch",
    "tick",
    "__version__",
]
