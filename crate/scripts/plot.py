"""Plot a run CSV written by `ubst --example N` or `ubst --scenario FILE`.

usage: python scripts/plot.py out/example3.csv [out.png]
"""
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main(path, target=None):
    df = pd.read_csv(path)
    states = [c for c in df.columns if c.startswith("x")]
    has_signal = "y" in df.columns
    fig, axes = plt.subplots(3 if has_signal else 2, 1, sharex=True, figsize=(7, 8 if has_signal else 6))
    for c in states:
        axes[0].plot(df.t, df[c], label=c)
    axes[0].set_yscale("symlog", linthresh=1e-2)
    axes[0].legend()
    axes[0].set_ylabel("error state")
    axes[1].semilogy(df.t, df.kappa)
    axes[1].set_ylabel("gain κ")
    if has_signal:
        axes[2].plot(df.t, df.y, label="y")
        axes[2].plot(df.t, df.dy_true, label="ẏ")
        axes[2].plot(df.t, df.z0, "--", label="z0")
        axes[2].plot(df.t, df.z1, "--", label="z1")
        axes[2].set_ylim(-3, 3)
        axes[2].legend()
    axes[-1].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(target or path.rsplit(".", 1)[0] + ".png", dpi=120)


if __name__ == "__main__":
    main(*sys.argv[1:3])
