"""Moment generating function along real and imaginary directions.

The mgf E[e^(u X_t)] is assembled from fractional integrals of the Volterra
solution.  The script evaluates

  - the characteristic function t -> E[e^(i y X_t)] for a few frequencies
    (modulus always at most 1),
  - the real-moment mgf t -> E[e^(u X_t)] for an explosive moment, growing
    without bound as t approaches the explosion time,
  - a complex moment with explosive real part, valid up to the explosion
    time of Re(u).

Run:  python demos/mgf_evaluation.py
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from rough_heston import default_params, vie

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = default_params()
fig, axes = plt.subplots(1, 3, figsize=(14, 4))

ts = np.linspace(0.05, 1.5, 25)
for y in (1.0, 2.0, 5.0):
    vals = [vie.mgf(params, 1j * y, float(t), steps=512) for t in ts]
    axes[0].plot(ts, np.abs(vals), label=f"y = {y}")
axes[0].set_title("|E[exp(i y X_t)]| <= 1")
axes[0].set_xlabel("t")
axes[0].legend(fontsize=8)

tstar = vie.blowup_time_oracle(params, -20.0)
ts = np.linspace(0.02, 0.97 * tstar, 25)
vals = [vie.mgf(params, -20.0, float(t)) for t in ts]
axes[1].semilogy(ts, vals, "b.-")
axes[1].axvline(tstar, color="r", ls="--", label=f"explosion time {tstar:.4f}")
axes[1].set_title("E[exp(-20 X_t)] toward the explosion")
axes[1].set_xlabel("t")
axes[1].legend(fontsize=8)

u = complex(-20.0, 4.0)
vals = [vie.mgf(params, u, float(t)) for t in ts]
axes[2].plot([v.real for v in vals], [v.imag for v in vals], "b.-")
axes[2].set_title(f"E[exp(({u}) X_t)] in the complex plane")
axes[2].set_xlabel("Re")
axes[2].set_ylabel("Im")

fig.tight_layout()
fig.savefig(OUT / "mgf_evaluation.png", dpi=130)
print(f"wrote {OUT / 'mgf_evaluation.png'}")
print(f"blow-up of the u=-20 moment at t ~ {tstar:.4f}; the characteristic "
      "function stays bounded for all maturities")
