#!/usr/bin/env python3
"""Plot a qreduce histogram CSV (counts vs exact probabilities).

Usage:
    qreduce search --array 15,14,6,0 --bits 4 --target 0 \
        --shots 10000 --seed 42 --out run.csv
    python3 docs/plot_histogram.py run.csv
"""

import csv
import sys

import matplotlib.pyplot as plt


def main(path: str) -> None:
    labels, freqs, exact = [], [], []
    with open(path, newline="") as f:
        rows = (line for line in f if not line.startswith("#"))
        for row in csv.DictReader(rows):
            labels.append(row["counter_bits"])
            freqs.append(float(row["frequency"]) if row["count"] else 0.0)
            exact.append(float(row["exact_probability"]))

    x = range(len(labels))
    fig, ax = plt.subplots(figsize=(1.2 * len(labels) + 2, 4))
    ax.bar(x, freqs, width=0.6, label="sampled frequency")
    ax.plot(x, exact, "k_", markersize=18, label="exact probability")
    ax.set_xticks(list(x), labels)
    ax.set_xlabel("counter state")
    ax.set_ylabel("probability")
    ax.legend()
    fig.tight_layout()
    out = path.rsplit(".", 1)[0] + ".png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    main(sys.argv[1])
