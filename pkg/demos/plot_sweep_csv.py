"""Companion plotter for the CSV emitted by `rough-heston sweep`.

The CLI only emits data; this script draws the five curves from the file.

    rough-heston sweep --u-from -40 --u-to -13 --n-points 120 --out sweep.csv
    python demos/plot_sweep_csv.py sweep.csv
"""

import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main(path):
    rows = list(csv.DictReader(open(path)))
    finite = [r for r in rows if r["explosion_time"] != "inf"]
    u = [float(r["u"]) for r in finite]
    series_a = [(x, float(r["explosion_time"])) for x, r in zip(u, finite) if r["case"] == "A"]
    series_b = [(x, float(r["explosion_time"])) for x, r in zip(u, finite) if r["case"] == "B"]

    fig, ax = plt.subplots(figsize=(7, 4.5))
    if series_a:
        ax.plot(*zip(*series_a), "b-", label="series estimate (case A)")
    if series_b:
        ax.plot(*zip(*series_b), "g-", label="series lower bound (case B)")
    ax.plot(u, [float(r["lower_bound"]) for r in finite], "k--", lw=0.9, label="lower bound")
    ax.plot(u, [float(r["upper_bound"]) for r in finite], "k--", lw=0.9, label="upper bound")
    ax.plot(u, [float(r["classical"]) for r in finite], "r:", label="classical (alpha=1)")
    ax.set_xlabel("moment u")
    ax.set_ylabel("explosion time")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    out = pathlib.Path(path).with_suffix(".png")
    fig.tight_layout()
    fig.savefig(out, dpi=130)
    print(f"wrote {out}")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        raise SystemExit(__doc__)
    main(sys.argv[1])
