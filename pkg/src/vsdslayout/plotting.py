"""Matplotlib figures for run reports, rendered off-screen to files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Circle, Polygon  # noqa: E402

from .catalog import LayoutInstance  # noqa: E402
from .evolution import RunResult  # noqa: E402
from .experiments import RunStats  # noqa: E402
from .geometry import ContainerDisk  # noqa: E402
from .report import KIND_COLORS, ZONE_COLOR  # noqa: E402

__all__ = ["convergence_figure", "configurations_figure", "layout_figure", "save"]

# fixed metadata keeps PNG bytes stable across runs
_PNG_META = {"Software": None}


def save(fig, path) -> None:
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)


def convergence_figure(stats: RunStats, runs: list[RunResult], title: str = ""):
    """Median best-feasible objective with its interquartile band and the best run."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    g = stats.generations
    finite = np.isfinite(stats.median_curve)
    if finite.any():
        lo = np.where(np.isfinite(stats.q25_curve), stats.q25_curve, np.nan)
        hi = np.where(np.isfinite(stats.q75_curve), stats.q75_curve, np.nan)
        ax.fill_between(g, lo, hi, color="tab:blue", alpha=0.25, linewidth=0, label="25-75% range")
        ax.plot(g[finite], stats.median_curve[finite], color="tab:blue", label="median")
    best = runs[stats.best_run].best_curve
    ok = np.isfinite(best)
    if ok.any():
        ax.plot(np.arange(best.size)[ok], best[ok], color="tab:red", lw=0.8, ls="--", label="best run")
    ax.set_xlabel("generation")
    ax.set_ylabel("best feasible inertia")
    if title:
        ax.set_title(title)
    if finite.any() or ok.any():
        ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def configurations_figure(stats: RunStats, title: str = ""):
    """Distinct configurations reached per run, among all and among feasible individuals."""
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    n = len(stats.configurations_all)
    x = np.arange(n)
    ax.bar(x - 0.2, stats.configurations_all, width=0.4, label="all individuals")
    ax.bar(x + 0.2, stats.configurations_feasible, width=0.4, label="feasible individuals")
    ax.set_xlabel("run")
    ax.set_ylabel("configurations reached")
    ax.set_xticks(x)
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def layout_figure(layout: LayoutInstance, container: ContainerDisk, zones=(), title: str = ""):
    fig, ax = plt.subplots(figsize=(5, 5))
    r = container.outer_radius
    ax.add_patch(Circle(container.center, r, fill=False, ec="0.2"))
    for z in zones:
        ax.add_patch(Polygon(z.vertices(), closed=True, fc=ZONE_COLOR, ec="0.2"))
    for p in layout.parts:
        color = KIND_COLORS.get(p.kind, KIND_COLORS["diverse"])
        s = p.shape
        if s.is_disk:
            ax.add_patch(Circle(s.center, s.radius, fc=color, ec="0.2", lw=0.6))
        else:
            ax.add_patch(Polygon(s.vertices(), closed=True, fc=color, ec="0.2", lw=0.6))
    cx, cy = container.center
    ax.set_xlim(cx - 1.05 * r, cx + 1.05 * r)
    ax.set_ylim(cy - 1.05 * r, cy + 1.05 * r)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return fig
