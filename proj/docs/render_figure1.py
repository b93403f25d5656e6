#!/usr/bin/env python3
"""Render the panel CSVs written by ncho_figure as two heatmaps.

Usage: python3 docs/render_figure1.py [docs/figure1_even.csv docs/figure1_odd.csv] [-o figure1.png]
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap


def load(path):
    data = np.genfromtxt(path, delimiter=",", names=True)
    b = np.unique(data["b"])
    a = np.unique(data["a"])
    shape = (len(b), len(a))
    # 0 none, 1 plus only, 2 minus only, 3 both
    code = (data["plus"] + 2 * data["minus"]).reshape(shape)
    return b, a, code


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("inputs", nargs="*", default=["docs/figure1_even.csv", "docs/figure1_odd.csv"])
    parser.add_argument("-o", "--output", default="docs/figure1.png")
    args = parser.parse_args()

    cmap = ListedColormap(["white", "tab:red", "tab:blue", "tab:purple"])
    fig, axes = plt.subplots(1, len(args.inputs), figsize=(6 * len(args.inputs), 5), squeeze=False)
    for ax, path in zip(axes[0], args.inputs):
        b, a, code = load(path)
        ax.pcolormesh(b, a, code.T, cmap=cmap, vmin=-0.5, vmax=3.5, shading="nearest")
        ax.set_xlabel("b")
        ax.set_ylabel("a")
        ax.set_title(path.rsplit("/", 1)[-1].removesuffix(".csv"))
    handles = [plt.Rectangle((0, 0), 1, 1, color=cmap(i)) for i in (1, 2, 3)]
    fig.legend(handles, ["plus", "minus", "both"], loc="upper center", ncol=3)
    fig.savefig(args.output, dpi=120, bbox_inches="tight")
    print(args.output)


if __name__ == "__main__":
    main()
