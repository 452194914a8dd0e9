#!/usr/bin/env python3
"""Both directions of mutual adaptation.

System -> user: the speed model's centroids track the operator as their
transport speed drifts upward across clutch cycles (retraining on the
most recent features at every release).

User -> system: a scripted slider schedule mid-session changes the
reactivity and scale bounds, visible as a different glide profile.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from intentscale.adaptation import FeatureBuffer, retrain_on_unclutch
from intentscale.fcm import COARSE, FINE, FcmConfig, ModelBank
from intentscale.sim import load_scenario, run_headless
from intentscale.synth import coarse_window, fine_window, segment_features

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# --- recognizer retraining tracks operator drift ---

rng = np.random.default_rng(3)
buf = FeatureBuffer(capacity=800)
bank = ModelBank()
cfg = FcmConfig(seed=1)
drift_speeds = [0.10, 0.14, 0.18, 0.22, 0.26]
coarse_track, fine_track = [], []
for v in drift_speeds:
    for _ in range(2):
        for f in segment_features(coarse_window(rng, speed=v)):
            buf.record(f)
        for f in segment_features(fine_window(rng)):
            buf.record(f)
    bank, _ = retrain_on_unclutch(buf, bank, 800, cfg)
    coarse_track.append(bank.speed.centroid_of(COARSE))
    fine_track.append(bank.speed.centroid_of(FINE))
    print(f"operator speed {v:.2f} -> coarse centroid {coarse_track[-1]:.3f}")

# --- user parameter updates change the glide ---

scenario = load_scenario("pegtransfer-4ring")
ma = run_headless(scenario, "adaptive-ma", seed=1)
ticks = [r for r in ma.records if "event" not in r]
updates = [r for r in ma.records if r.get("event") == "params"]
ts = [r["t"] for r in ticks]
ss = [r["s"] for r in ticks]

fig, (left, right) = plt.subplots(1, 2, figsize=(11, 4))
left.plot(drift_speeds, coarse_track, "o-", color="tab:red", label="coarse centroid")
left.plot(drift_speeds, fine_track, "o-", color="tab:blue", label="fine centroid")
left.set_xlabel("operator transport speed [m/s]")
left.set_ylabel("speed-model centroid [m/s]")
left.set_title("retraining follows the operator")
left.legend()
right.plot(ts, ss, lw=0.7, color="tab:green")
for u in updates:
    right.axvline(u["t"], color="tab:orange", ls="--")
    right.text(u["t"], 4.6, " sliders", color="tab:orange", fontsize=8)
right.set_ylim(0, 5)
right.set_xlabel("t [s]")
right.set_ylabel("applied scale")
right.set_title("scripted slider updates mid-session")
fig.tight_layout()
fig.savefig(OUT / "mutual_adaptation.png", dpi=120)
print(f"wrote {OUT / 'mutual_adaptation.png'}")
