import numpy as np
import pytest

from intentscale.errors import InsufficientDataError
from intentscale.features import (
    KinematicEstimate,
    compute_alignness,
    estimate_velocity,
    extract_features,
)
from intentscale.synth import coarse_window, fine_window, window_features
from intentscale.trajectory import PoseSample, TrajectoryWindow


def window_from_positions(positions, dt=0.01):
    w = TrajectoryWindow(n_window=max(2, len(positions)))
    for k, p in enumerate(positions):
        w.push(PoseSample(t=k * dt, position=p, clutch=True))
    return w


def kin(tool=(1, 0, 0), last=0.5):
    k = KinematicEstimate.initial(tool)
    return k.advanced(k.velocity, k.tool_dir, last)


# --- velocity ---


def test_velocity_constant_drift():
    w = window_from_positions([(0.001 * k, 0, 0) for k in range(20)])
    v = estimate_velocity(w)
    assert np.allclose(v, [0.1, 0, 0], atol=1e-12)


def test_velocity_stationary():
    w = window_from_positions([(0.2, 0.1, 0)] * 10)
    assert np.allclose(estimate_velocity(w), 0.0)


def test_velocity_needs_two_samples():
    w = window_from_positions([(0, 0, 0)])
    with pytest.raises(InsufficientDataError):
        estimate_velocity(w)


def test_velocity_uses_last_k_steps_only():
    # fast early motion followed by exactly 5 slow steps
    positions = [(0.01 * k, 0, 0) for k in range(10)]
    positions += [(positions[-1][0] + 0.0001 * k, 0, 0) for k in range(1, 6)]
    w = window_from_positions(positions)
    v = estimate_velocity(w, k_velocity=5)
    assert v[0] == pytest.approx(0.01, abs=1e-9)


# --- alignness ---


def test_alignness_parallel():
    assert compute_alignness(np.array([0.1, 0, 0]), np.array([1.0, 0, 0]), 0.5) == 1.0


def test_alignness_orthogonal():
    assert compute_alignness(np.array([0, 0.1, 0]), np.array([1.0, 0, 0]), 0.5) == 0.0


def test_alignness_diagonal():
    a = compute_alignness(np.array([0.1, 0.1, 0]), np.array([1.0, 0, 0]), 0.5)
    assert a == pytest.approx(1 / np.sqrt(2), abs=1e-8)


def test_alignness_hold_rule():
    assert compute_alignness(np.zeros(3), np.array([1.0, 0, 0]), 0.37) == 0.37
    tiny = np.array([5e-5, 0, 0])
    assert compute_alignness(tiny, np.array([1.0, 0, 0]), 0.37) == 0.37


def test_alignness_magnitude_invariance():
    rng = np.random.default_rng(3)
    u = np.array([1.0, 0, 0])
    for _ in range(100):
        v = rng.normal(0, 1, 3)
        if np.linalg.norm(v) < 1e-3:
            continue
        base = compute_alignness(v, u, 0.5)
        for c in (0.01, 2.0, 1e4):
            assert compute_alignness(c * v, u, 0.5) == pytest.approx(base, abs=1e-12)


# --- extract_features ---


def test_features_monotone_drift():
    w = window_from_positions([(0.001 * k, 0, 0) for k in range(101)])
    fv = extract_features(w, kin())
    assert fv.displacement == pytest.approx(0.1, abs=1e-12)
    assert fv.speed == pytest.approx(0.1, abs=1e-9)
    assert fv.alignness == pytest.approx(1.0)


def test_features_alternating_jitter_cancels():
    # 100 alternating +/-0.001 steps -> net displacement exactly zero
    positions = [((k % 2) * 0.001, 0, 0) for k in range(101)]
    w = window_from_positions(positions)
    fv = extract_features(w, kin())
    assert fv.displacement == 0.0
    assert fv.speed > 0


def test_features_stationary_window_holds_alignness():
    w = window_from_positions([(0.3, 0.2, 0)] * 50)
    fv = extract_features(w, kin(last=0.42))
    assert fv.speed == 0.0
    assert fv.displacement == 0.0
    assert fv.alignness == 0.42


def test_features_insufficient_samples():
    w = window_from_positions([(0, 0, 0)])
    with pytest.raises(InsufficientDataError):
        extract_features(w, kin())


def test_displacement_bounded_by_path_length():
    rng = np.random.default_rng(6)
    for _ in range(50):
        steps = rng.normal(0, 0.002, (30, 3))
        positions = np.vstack([np.zeros(3), np.cumsum(steps, axis=0)])
        w = window_from_positions(positions)
        fv = extract_features(w, kin())
        path = float(np.linalg.norm(steps, axis=1).sum())
        assert fv.displacement <= path + 1e-12


def test_displacement_equals_path_for_collinear_steps():
    w = window_from_positions([(0.002 * k, 0, 0) for k in range(30)])
    fv = extract_features(w, kin())
    assert fv.displacement == pytest.approx(0.002 * 29, abs=1e-12)


def test_generator_feature_separation():
    # coarse vs fine generator pairs must order per the feature conventions
    rng = np.random.default_rng(123)
    n = 1000
    wins = 0
    for _ in range(n):
        fc = window_features(coarse_window(rng))
        ff = window_features(fine_window(rng))
        ok = (
            fc.speed > ff.speed
            and fc.displacement > ff.displacement
            and ff.alignness > fc.alignness
        )
        wins += ok
    assert wins / n >= 0.95
