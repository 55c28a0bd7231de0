#!/usr/bin/env python3
"""Plot the iteration-vs-brute-force curves from a fig12-style CSV.

Usage:
    qreduce figure fig12 --seed 7 --out fig12.csv
    python3 docs/plot_iteration_curves.py fig12.csv
"""

import csv
import sys

import matplotlib.pyplot as plt


def main(path: str) -> None:
    rows = []
    with open(path, newline="") as f:
        filtered = (line for line in f if not line.startswith("#"))
        rows = list(csv.DictReader(filtered))

    t = [int(r["iteration"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    for column, style in (("p_target_m8", "o-"), ("brute_force_m8", "--"),
                          ("p_target_m16", "s-"), ("brute_force_m16", ":")):
        ax.plot(t, [float(r[column]) for r in rows], style, label=column)
    ax.set_xlabel("iteration")
    ax.set_ylabel("P(target)")
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    out = path.rsplit(".", 1)[0] + ".png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    main(sys.argv[1])
