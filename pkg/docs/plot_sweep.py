"""Plot MAE against landmark count from a ``sweep-landmarks`` CSV.

    python3 docs/plot_sweep.py results/sweep_landmarks_u_user.csv sweep.png

Needs matplotlib, which the package itself does not depend on.
"""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def main(src, dst):
    with open(src, newline="") as fh:
        rows = list(csv.DictReader(fh))
    n = [int(r["n"]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    for col in rows[0]:
        if col == "n":
            continue
        style = "--" if col.startswith("baseline_") else "-o"
        ax.plot(n, [float(r[col]) for r in rows], style, label=col, markersize=3)
    ax.set_xlabel("number of landmarks")
    ax.set_ylabel("MAE")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(dst, dpi=150)


if __name__ == "__main__":
    main(*sys.argv[1:3])
