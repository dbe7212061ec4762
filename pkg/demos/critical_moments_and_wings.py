"""Critical moments over maturity, Lee wing slope and density tail exponent.

For negatively correlated parameters the lower critical moment u-(T) is
computed by inverting the explosion time on the case-A interval.  The script
shows

  - u-(T) over the invertible maturity range (it increases with maturity),
  - the small-maturity decay |u-(T)| ~ T^(-alpha) on a log-log scale,
  - the left-wing implied-variance slope from Lee's moment formula,
    normalized by maturity (always in (0, 2]),
  - the power-law exponent of the density of S_T at zero.

Run:  python demos/critical_moments_and_wings.py
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from rough_heston import critical, default_params

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = default_params()
t_max = critical.maturity_boundary(params, "lower")
print(f"invertible maturity range: (0, {t_max:.4f}]")

maturities = np.geomspace(t_max / 300.0, 0.95 * t_max, 25)
results = [critical.lower_critical_moment(params, float(T)) for T in maturities]
moments = np.array([r.u_critical for r in results])
slopes = np.array([critical.lee_left_wing_slope(params, float(T)) for T in maturities])
tails = np.array([critical.tail_exponents(params, float(T)).left for T in maturities])

fig, axes = plt.subplots(2, 2, figsize=(11, 7))

axes[0, 0].plot(maturities, moments, "b.-")
axes[0, 0].set_xlabel("maturity T")
axes[0, 0].set_ylabel("lower critical moment")
axes[0, 0].set_title("u-(T), nondecreasing in T")

axes[0, 1].loglog(maturities, -moments, "b.-", label="|u-(T)|")
ref = -moments[0] * (maturities / maturities[0]) ** -params.alpha
axes[0, 1].loglog(maturities, ref, "r--", label=f"slope -alpha = {-params.alpha}")
axes[0, 1].set_xlabel("maturity T")
axes[0, 1].set_title("small-maturity order")
axes[0, 1].legend(fontsize=8)

axes[1, 0].semilogx(maturities, slopes * maturities, "b.-")
axes[1, 0].set_xlabel("maturity T")
axes[1, 0].set_ylabel("slope * T")
axes[1, 0].set_title("Lee left-wing slope (normalized), in (0, 2]")

axes[1, 1].semilogx(maturities, tails, "b.-")
axes[1, 1].set_xlabel("maturity T")
axes[1, 1].set_ylabel("exponent")
axes[1, 1].set_title("density tail exponent at zero: -u-(T) - 1")

fig.tight_layout()
fig.savefig(OUT / "critical_moments_and_wings.png", dpi=130)
print(f"wrote {OUT / 'critical_moments_and_wings.png'}")

slope_fit = np.polyfit(np.log(maturities[:10]), np.log(-moments[:10]), 1)[0]
print(f"fitted small-T decay exponent: {slope_fit:.4f} (expected {-params.alpha})")
