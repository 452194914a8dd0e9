"""Two-cluster fuzzy C-means over scalar motion features.

Each motion feature (speed, alignness, displacement) gets its own 1-D
model with exactly two clusters, one later labeled ``coarse`` and one
``fine``. Training minimizes

    J = sum_i sum_j u_ij^m |x_i - c_j|^2

by alternating the classic update pair

    u_ij = 1 / sum_k (|x_i - c_j| / |x_i - c_k|)^(2/(m-1))
    c_j  = sum_i u_ij^m x_i / sum_i u_ij^m

until the largest centroid shift in one sweep drops below ``tol``.
Initialization is deterministic: the 25th/75th sample percentiles plus a
seeded jitter of at most 1% of the data range (breaks exact degeneracy
when the percentiles coincide).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import AmbiguousLabelError, DegenerateDataError, InsufficientDataError

COARSE = "coarse"
FINE = "fine"
FEATURE_KINDS = ("speed", "alignness", "displacement")

# Below this distance a sample is considered to sit exactly on a centroid
# and receives hard membership 1 (the update formula would divide by zero).
ZERO_DISTANCE = 1e-12

_MIN_SAMPLES = 4


@dataclass(frozen=True)
class FcmConfig:
    """Training knobs; ``seed`` only drives the init jitter."""

    m: float = 2.0
    max_iter: int = 200
    tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.m <= 1.0:
            raise ValueError(f"fuzziness m must be > 1, got {self.m}")
        if self.tol <= 0.0:
            raise ValueError(f"tol must be > 0, got {self.tol}")


@dataclass(frozen=True)
class MembershipPair:
    """Membership of one sample in the coarse and fine clusters (sums to 1)."""

    u_coarse: float
    u_fine: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.u_coarse, self.u_fine)


@dataclass(frozen=True)
class FcmModel:
    """A trained per-feature model; immutable so it can be shared freely.

    ``label_of_cluster`` is index-aligned with ``centroids`` and is None
    until :func:`assign_semantic_labels` has run.
    """

    centroids: tuple[float, float]
    feature_kind: str
    config: FcmConfig
    trained_on: int
    iterations: int = 0
    converged: bool = True
    label_of_cluster: tuple[str, str] | None = None

    @property
    def labeled(self) -> bool:
        return self.label_of_cluster is not None

    def centroid_of(self, label: str) -> float:
        if self.label_of_cluster is None:
            raise ValueError("model has no semantic labels yet")
        return self.centroids[self.label_of_cluster.index(label)]


def _memberships(x: np.ndarray, centroids: np.ndarray, m: float) -> np.ndarray:
    """Membership matrix (N, 2) for samples ``x`` given ``centroids``."""
    d = np.abs(x[:, None] - centroids[None, :])
    on_centroid = d < ZERO_DISTANCE
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        inv = d ** (-2.0 / (m - 1.0))
        u = inv / inv.sum(axis=1, keepdims=True)
    hit = on_centroid.any(axis=1)
    if hit.any():
        rows = np.nonzero(hit)[0]
        u[rows] = 0.0
        u[rows, d[rows].argmin(axis=1)] = 1.0
    return u


def initial_centroids(samples: np.ndarray, cfg: FcmConfig) -> np.ndarray:
    """Deterministic starting centroids: quartiles plus seeded <=1%-range jitter."""
    x = np.asarray(samples, dtype=float)
    lo, hi = np.percentile(x, (25.0, 75.0))
    span = float(x.max() - x.min())
    rng = np.random.default_rng(cfg.seed)
    c = np.array([lo, hi]) + rng.uniform(-0.01, 0.01, size=2) * span
    if abs(c[1] - c[0]) < ZERO_DISTANCE * max(1.0, abs(span)):
        c[1] += 0.01 * span
    return c


def update_step(samples: np.ndarray, centroids: np.ndarray, m: float) -> np.ndarray:
    """One full alternating sweep: memberships from centroids, then new centroids."""
    x = np.asarray(samples, dtype=float)
    c = np.asarray(centroids, dtype=float)
    w = _memberships(x, c, m) ** m
    wsum = w.sum(axis=0)
    num = (w * x[:, None]).sum(axis=0)
    # A cluster with zero total weight (all mass hard-assigned elsewhere)
    # keeps its previous centroid instead of producing 0/0.
    return np.where(wsum > 0.0, num / np.where(wsum > 0.0, wsum, 1.0), c)


def objective(samples: np.ndarray, centroids: np.ndarray, m: float) -> float:
    """J evaluated with memberships recomputed from ``centroids``."""
    x = np.asarray(samples, dtype=float)
    c = np.asarray(centroids, dtype=float)
    d = np.abs(x[:, None] - c[None, :])
    u = _memberships(x, c, m)
    return float(((u**m) * d**2).sum())


def fcm_train(samples, cfg: FcmConfig = FcmConfig(), feature_kind: str = "speed") -> FcmModel:
    """Train an unlabeled two-cluster model on scalar samples.

    Deterministic given (samples, cfg.seed). Requires at least 4 samples
    with at least 2 distinct values.
    """
    if feature_kind not in FEATURE_KINDS:
        raise ValueError(f"unknown feature kind {feature_kind!r}")
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < _MIN_SAMPLES:
        raise InsufficientDataError(
            f"need at least {_MIN_SAMPLES} samples to train, got {x.size}"
        )
    if not np.isfinite(x).all():
        raise ValueError("training samples must be finite")
    if np.unique(x).size < 2:
        raise DegenerateDataError("all training samples are identical")

    c = initial_centroids(x, cfg)
    iterations = 0
    converged = False
    for iterations in range(1, cfg.max_iter + 1):
        c_new = update_step(x, c, cfg.m)
        shift = float(np.abs(c_new - c).max())
        c = c_new
        if shift < cfg.tol:
            converged = True
            break
    return FcmModel(
        centroids=(float(c[0]), float(c[1])),
        feature_kind=feature_kind,
        config=cfg,
        trained_on=int(x.size),
        iterations=iterations,
        converged=converged,
    )


def fcm_membership(model: FcmModel, x: float) -> MembershipPair:
    """Coarse/fine membership of a single value under a labeled model."""
    if model.label_of_cluster is None:
        raise ValueError("model has no semantic labels; run assign_semantic_labels")
    u = _memberships(np.array([x], dtype=float), np.asarray(model.centroids), model.config.m)[0]
    by_label = dict(zip(model.label_of_cluster, u))
    return MembershipPair(u_coarse=float(by_label[COARSE]), u_fine=float(by_label[FINE]))


def fcm_objective(model: FcmModel, samples) -> float:
    """J of ``samples`` under the model's current centroids."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise InsufficientDataError("objective needs at least one sample")
    return objective(x, np.asarray(model.centroids), model.config.m)


def assign_semantic_labels(model: FcmModel) -> FcmModel:
    """Label the two clusters per the feature's direction convention.

    Speed and displacement run high for coarse motion; alignness runs
    high (near 1) for fine motion.
    """
    c0, c1 = model.centroids
    if abs(c1 - c0) < ZERO_DISTANCE:
        raise AmbiguousLabelError(
            f"centroids {model.centroids} coincide; cannot label clusters"
        )
    high_is_coarse = model.feature_kind in ("speed", "displacement")
    high, low = (COARSE, FINE) if high_is_coarse else (FINE, COARSE)
    labels = (low, high) if c0 < c1 else (high, low)
    return replace(model, label_of_cluster=labels)


@dataclass(frozen=True)
class ModelBank:
    """The three per-feature models driving intent classification.

    A bank is usable for classification only once all three models are
    trained and labeled; until then the pipeline runs in degraded mode.
    """

    speed: FcmModel | None = None
    alignness: FcmModel | None = None
    displacement: FcmModel | None = None

    @property
    def trained(self) -> bool:
        return all(
            m is not None and m.labeled
            for m in (self.speed, self.alignness, self.displacement)
        )

    def get(self, kind: str) -> FcmModel | None:
        if kind not in FEATURE_KINDS:
            raise ValueError(f"unknown feature kind {kind!r}")
        return getattr(self, kind)

    def with_model(self, kind: str, model: FcmModel) -> "ModelBank":
        if kind not in FEATURE_KINDS:
            raise ValueError(f"unknown feature kind {kind!r}")
        return replace(self, **{kind: model})
