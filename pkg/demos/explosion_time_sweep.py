"""Explosion time of negative moments: series estimate, bounds, classical.

Sweeps u over the explosive part of the negative axis for three smoothness
levels and plots, per u:

  - the power-series explosion-time estimate (case A) or its series lower
    bound (case B),
  - the explicit lower/upper bounds (dashed),
  - the classical (alpha = 1) explosion time as a dotted reference.

The case-A interval for the default parameter set is u <= -12.5; to its right
the finite region continues as case B, where only bounds are available.

Run:  python demos/explosion_time_sweep.py
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from rough_heston import ModelParams, MomentCase, bounds, classical, classify, series

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

grid = np.linspace(-40.0, -6.0, 160)

fig, axes = plt.subplots(1, 3, figsize=(15, 4.2), sharey=True)
for ax, alpha in zip(axes, (0.6, 0.75, 0.9)):
    params = ModelParams(alpha=alpha, rho=-0.8, lam=2.0, xi=0.2, vbar=0.04, v0=0.04)
    rows = []
    for u in grid:
        u = float(u)
        case = classify(params, u)
        if case is MomentCase.A:
            value = series.explosion_time(params, u).value
        elif case is MomentCase.B:
            value = series.explosion_lower_bound(params, u).value
        else:
            rows.append((u, case.value, np.nan, np.nan, np.nan, np.nan))
            continue
        lo, hi = bounds.sandwich(params, u)
        rows.append((u, case.value, value, lo, hi, classical.explosion_time(params, u)))

    u_a = np.array([r[0] for r in rows if r[1] == "A"])
    u_b = np.array([r[0] for r in rows if r[1] == "B"])
    val = {r[0]: r[2:] for r in rows}
    ax.plot(u_a, [val[u][0] for u in u_a], "b-", label="series estimate (case A)")
    if len(u_b):
        ax.plot(u_b, [val[u][0] for u in u_b], "g-", label="series lower bound (case B)")
    finite = np.concatenate([u_a, u_b])
    ax.plot(finite, [val[u][1] for u in finite], "k--", lw=0.9, label="explicit lower bound")
    ax.plot(finite, [val[u][2] for u in finite], "k--", lw=0.9, label="explicit upper bound")
    ax.plot(finite, [val[u][3] for u in finite], "r:", label="classical (alpha=1)")
    ax.axvspan(grid[0], -12.5, color="0.92", zorder=0)
    ax.set_title(f"alpha = {alpha}")
    ax.set_xlabel("moment u")
    ax.set_yscale("log")
axes[0].set_ylabel("explosion time")
axes[0].legend(fontsize=8)
fig.suptitle("Moment explosion time and bounds (shaded: case A)")
fig.tight_layout()
fig.savefig(OUT / "explosion_time_sweep.png", dpi=130)
print(f"wrote {OUT / 'explosion_time_sweep.png'}")
