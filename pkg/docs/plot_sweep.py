"""Plot a sweep CSV produced by `qicomm sweep`.

Example:
    qicomm sweep --preset figure1 --m-min 1e4 --m-max 1e7 --points 120 --out sweep.csv
    python docs/plot_sweep.py sweep.csv
"""

import sys

import matplotlib.pyplot as plt
import numpy as np

STYLES = {
    "alice_opt_upper": ("C0", "-", "sender optimum (upper)"),
    "eve_upper": ("C3", "-", "eavesdropper optimum (upper)"),
    "eve_lower": ("C3", "--", "eavesdropper optimum (lower)"),
    "homodyne_upper": ("C1", "-.", "homodyne (upper)"),
    "opa_upper": ("C2", ":", "amplifier (upper)"),
}


def main(path):
    rows = np.genfromtxt(path, delimiter=",", names=True)
    for column, (color, style, label) in STYLES.items():
        values = rows[column]
        mask = np.isfinite(values)
        if mask.any():
            plt.loglog(rows["M"][mask], values[mask], style, color=color, label=label)
    plt.xlabel("mode pairs per bit, M")
    plt.ylabel("error probability bound")
    plt.grid(True, which="both", alpha=0.3)
    plt.legend()
    plt.tight_layout()
    plt.show()


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "sweep.csv")
