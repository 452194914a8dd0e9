#!/usr/bin/env python3
"""The per-tick pipeline on a fine -> coarse -> fine leader stream.

Feeds a concatenated synthetic stream through the full engine and plots
the fused coarse membership, the selected label, and the smoothed scale.
The low-pass filter is visible as the exponential glide between the two
scales whenever the classification flips.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from intentscale.engine import EngineConfig, SharedControlEngine
from intentscale.synth import coarse_window, fine_window, make_model_bank

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

rng = np.random.default_rng(5)
bank = make_model_bank(rng, n_windows=25)
engine = SharedControlEngine(EngineConfig(), models=bank)

positions = []
for window in (fine_window(rng, n=400), coarse_window(rng, n=400), fine_window(rng, n=400)):
    base = positions[-1] if positions else np.zeros(3)
    positions.extend(base + s.position for s in window)

ts, scale, fused_coarse = [], [], []
for k, pos in enumerate(positions):
    res = engine.step(k * 0.01, pos, True)
    ts.append(res.t)
    scale.append(res.s_applied)
    fused_coarse.append(res.intent.fused.u_coarse if res.intent else 0.5)

fig, (top, bottom) = plt.subplots(2, 1, figsize=(8, 5), sharex=True)
top.plot(ts, fused_coarse, color="tab:red")
top.axhline(0.5, ls=":", color="#666")
top.set_ylabel("fused u_coarse")
top.set_title("fine / coarse / fine stream through the intent pipeline")
bottom.plot(ts, scale, color="tab:green")
bottom.set_ylabel("applied scale")
bottom.set_xlabel("t [s]")
for x in (4.0, 8.0):
    top.axvline(x, color="#bbb", lw=0.8)
    bottom.axvline(x, color="#bbb", lw=0.8)
fig.tight_layout()
fig.savefig(OUT / "intent_pipeline.png", dpi=120)
print(f"final scale {scale[-1]:.3f}; wrote {OUT / 'intent_pipeline.png'}")
