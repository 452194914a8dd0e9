#!/usr/bin/env python3
"""Fuzzy two-cluster separation of a motion feature.

Generates speed samples from synthetic fine and coarse leader segments,
trains a two-cluster fuzzy model on the pooled values, and plots the
resulting membership curves. The soft boundary between the clusters is
what lets the controller blend rather than snap between scales.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from intentscale.fcm import COARSE, FINE, FcmConfig, assign_semantic_labels, fcm_membership, fcm_train
from intentscale.synth import coarse_window, fine_window, segment_features

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

rng = np.random.default_rng(21)
speeds = []
for _ in range(30):
    speeds += [f.speed for f in segment_features(fine_window(rng))]
    speeds += [f.speed for f in segment_features(coarse_window(rng))]
speeds = np.array(speeds)

model = assign_semantic_labels(fcm_train(speeds, FcmConfig(seed=0), feature_kind="speed"))
print(f"trained on {model.trained_on} speed samples in {model.iterations} iterations")
print(f"fine centroid   {model.centroid_of(FINE):.4f} m/s")
print(f"coarse centroid {model.centroid_of(COARSE):.4f} m/s")

xs = np.linspace(0.0, 0.2, 400)
u_coarse = [fcm_membership(model, float(x)).u_coarse for x in xs]
u_fine = [fcm_membership(model, float(x)).u_fine for x in xs]

fig, (top, bottom) = plt.subplots(2, 1, figsize=(7, 5), sharex=True)
top.hist(speeds, bins=80, color="#888", alpha=0.7)
top.set_ylabel("samples")
top.set_title("speed feature: fine and coarse regimes")
bottom.plot(xs, u_fine, label="u_fine", color="tab:blue")
bottom.plot(xs, u_coarse, label="u_coarse", color="tab:red")
bottom.axvline(model.centroid_of(FINE), ls=":", color="tab:blue")
bottom.axvline(model.centroid_of(COARSE), ls=":", color="tab:red")
bottom.set_xlabel("speed [m/s]")
bottom.set_ylabel("membership")
bottom.legend()
fig.tight_layout()
fig.savefig(OUT / "fcm_two_regimes.png", dpi=120)
print(f"wrote {OUT / 'fcm_two_regimes.png'}")
