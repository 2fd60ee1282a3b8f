"""Static SVG figures for a recorded run."""

from __future__ import annotations

import warnings
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .stats import ShortSeriesWarning, savitzky_golay  # noqa: E402

SMOOTH_WINDOW = 51
SMOOTH_ORDER = 2
PLOT_FILES = (
    "reward_curve.svg",
    "reward_histogram.svg",
    "steps_curve.svg",
    "success_rate.svg",
)


def smooth(series) -> tuple[np.ndarray, bool]:
    """Savitzky-Golay 51/2 smoothing; the flag is False when the series was too short."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ShortSeriesWarning)
        out = savitzky_golay(series, SMOOTH_WINDOW, SMOOTH_ORDER)
    short = any(issubclass(w.category, ShortSeriesWarning) for w in caught)
    return out, not short


def _curve(ax, agents, column, ylabel):
    banner = False
    for agent, cols in sorted(agents.items()):
        raw = np.asarray(cols[column], dtype=float)
        ep = np.asarray(cols["episode"])
        sm, ok = smooth(raw)
        banner |= not ok
        ax.plot(ep, raw, alpha=0.25, linewidth=0.6)
        ax.plot(ep, sm, linewidth=1.4, label=f"Agent {agent}")
    ax.set_xlabel("episode")
    ax.set_ylabel(ylabel)
    ax.legend()
    if banner:
        ax.set_title(f"unsmoothed: fewer than {SMOOTH_WINDOW} episodes", fontsize=9)
    return banner


def write_plots(agents: dict[int, dict[str, list]], out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    paths = [out_dir / name for name in PLOT_FILES]

    fig, ax = plt.subplots(figsize=(7, 4))
    _curve(ax, agents, "total_reward", "total reward per episode")
    fig.savefig(paths[0], format="svg")
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(7, 4))
    for agent, cols in sorted(agents.items()):
        ax.hist(cols["total_reward"], bins=40, alpha=0.5, label=f"Agent {agent}")
    ax.set_xlabel("total reward per episode")
    ax.set_ylabel("episodes")
    ax.legend()
    fig.savefig(paths[1], format="svg")
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(7, 4))
    _curve(ax, agents, "steps", "steps per episode")
    fig.savefig(paths[2], format="svg")
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(7, 4))
    for agent, cols in sorted(agents.items()):
        s = np.asarray(cols["success"], dtype=float)
        running = np.cumsum(s) / np.arange(1, len(s) + 1)
        ax.plot(cols["episode"], running, label=f"Agent {agent}")
    ax.set_ylim(0, 1.02)
    ax.set_xlabel("episode")
    ax.set_ylabel("running success rate")
    ax.legend()
    fig.savefig(paths[3], format="svg")
    plt.close(fig)
    return paths
