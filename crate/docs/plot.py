#!/usr/bin/env python3
"""Plot figure data written by `measdep sweep`.

Usage:
    measdep sweep --figure fig3 --out fig3.csv
    python3 docs/plot.py fig3.csv            # writes fig3.png

The figure is recognised from the CSV header. `NA` cells are left blank.
Needs matplotlib and numpy.
"""

import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

V_T = 2 * (2 ** 0.5 - 1)


def read(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    def num(x):
        return np.nan if x == "NA" else float(x)
    cols = {k: [r[k] for r in rows] for k in rows[0]}
    return {k: (v if k == "panel" else np.array([num(x) for x in v])) for k, v in cols.items()}


def square(ax, d, field, label):
    m1, m2 = np.unique(d["m1"]), np.unique(d["m2"])
    z = d[field].reshape(len(m1), len(m2)).T
    mesh = ax.pcolormesh(m1, m2, z, shading="auto", cmap="viridis")
    ax.contour(m1, m2, z, levels=10, colors="white", linewidths=0.5)
    ax.set_xlabel("M1")
    ax.set_ylabel("M2")
    ax.set_aspect("equal")
    plt.colorbar(mesh, ax=ax, label=label)


def curves(ax, x, d, fields, xlabel):
    for f in fields:
        ax.plot(x, d[f], label=f)
    ax.axvline(V_T, color="grey", linestyle=":", linewidth=0.8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("bits")
    ax.legend()


def main(path):
    d = read(path)
    header = tuple(d)
    if header == ("m1", "m2", "v_g"):
        fig, ax = plt.subplots()
        square(ax, d, "v_g", "V_G")
    elif header in (("m1", "m2", "i_g"), ("m1", "m2", "i_interp")):
        fig, ax = plt.subplots()
        square(ax, d, header[2], "mutual information (bits)")
    elif header[0] == "v":
        fig, ax = plt.subplots()
        curves(ax, d["v"], d, header[1:], "V")
    elif header[0] == "z":
        fig, ax = plt.subplots()
        ax.plot(d["z"], d["i_four"])
        ax.set_xlabel("z")
        ax.set_ylabel("bits")
    elif header[0] == "panel":
        fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
        panel = np.array(d["panel"])
        sl = {k: (v[panel == "slice"] if k != "panel" else None) for k, v in d.items()}
        mn = {k: (v[panel == "min"] if k != "panel" else None) for k, v in d.items()}
        curves(left, sl["m2"], sl, ("i_interp", "i_hall", "i_banik"), "M2 at V = V_T")
        curves(right, mn["v"], mn, ("i_interp", "i_hall", "i_banik"), "V (minimized over M2)")
    else:
        sys.exit(f"unrecognised header: {','.join(header)}")
    out = Path(path).with_suffix(".png")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    main(sys.argv[1])
