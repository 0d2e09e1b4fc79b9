"""Figures written next to the CSV output of the census and density commands."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["plot_census", "plot_density"]


def plot_census(censuses, hurwitz, path) -> None:
    """Weighted class counts per trace against H(t^2 - 4p), one panel per prime (up to 6)."""
    shown = list(censuses)[:6]
    fig, axes = plt.subplots(len(shown), 1, figsize=(7, 2.2 * len(shown)), squeeze=False)
    for ax, c in zip(axes[:, 0], shown):
        ts = list(c.classes)
        ax.bar(ts, [float(c.weighted[t]) for t in ts], color="#8fb3d9", label="census, weight 2/#Aut")
        ax.plot(ts, [float(hurwitz(t * t - 4 * c.p)) for t in ts], "k.", label="H(t^2 - 4p)")
        ax.set_ylabel(f"p = {c.p}")
    axes[0, 0].legend(loc="upper right", fontsize=8)
    axes[-1, 0].set_xlabel("trace t")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_density(estimates, path) -> None:
    ms = [e.M for e in estimates]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ms, [e.anomalous_fraction for e in estimates], "o-")
    for e in estimates:
        ax.annotate(f"{e.anomalous}/{e.conditioned_successes}", (e.M, e.anomalous_fraction),
                    textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax.set_xscale("log")
    ax.set_xlabel("M")
    ax.set_ylabel("anomalous fraction among accepted draws")
    ax.set_ylim(0, 1)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
