"""Matplotlib figure rendering for the report-producing CLI paths.

Figures are written next to the delimited output; they are presentation-only
and never part of the machine-readable contract.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evalbench import BenchReport
from .matching import ProjectionPoint

_CMAP = plt.get_cmap("tab10")


def bench_figure(report: BenchReport, path) -> None:
    """Grouped bars: one panel per metric, one group per k, one bar per strategy."""
    metrics = (("Str-Sim (mean edit distance)", "strSim"), ("Attr-Sim (mean attribute distance)", "attrSim"))
    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    width = 0.8 / len(report.strategies)
    xs = np.arange(len(report.k_values))
    for ax, (title, key) in zip(axes, metrics):
        for i, strat in enumerate(report.strategies):
            vals = [report.cell(k, strat)[key] for k in report.k_values]
            ax.bar(xs + i * width, vals, width, label=strat, color=_CMAP(i))
        ax.set_xticks(xs + width * (len(report.strategies) - 1) / 2)
        ax.set_xticklabels([str(k) for k in report.k_values])
        ax.set_xlabel("k")
        ax.set_title(f"{report.dataset}: {title}")
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def projection_figure(points: list[ProjectionPoint], path, title: str = "projection") -> None:
    """2D layout scatter, colored by cluster label when present (noise in grey)."""
    fig, ax = plt.subplots(figsize=(6, 5))
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    labels = [p.cluster_label for p in points]
    if any(l is not None for l in labels):
        colors = ["#999999" if l in (None, -1) else _CMAP(l % 10) for l in labels]
    else:
        colors = ["#1f77b4"] * len(points)
    ax.scatter(xs, ys, s=14, c=colors, linewidths=0)
    ax.set_title(title)
    ax.set_xticks([])
    ax.set_yticks([])
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def scatter_figure(
    rows: list[tuple[str, float, float]], x_attr: str, y_attr: str, path
) -> None:
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.scatter([r[1] for r in rows], [r[2] for r in rows], s=14)
    ax.set_xlabel(x_attr)
    ax.set_ylabel(y_attr)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
