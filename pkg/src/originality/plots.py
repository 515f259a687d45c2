"""Figure rendering for score reports and heatmap grids.

Figures are a visual companion to the delimited reports, rendered headlessly
through the Agg backend; nothing here feeds back into scoring.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .pipeline import HeatmapGrid
from .scores import ScoreReport


def save_score_figure(report: ScoreReport, path) -> str:
    """Bar chart of scores in rank order; the dashed line marks score 1."""
    ids = report.ids or tuple(str(i) for i in range(len(report.scores)))
    order = np.argsort(report.ranks)
    scores = np.nan_to_num(np.asarray(report.scores, dtype=float)[order], nan=0.0)
    labels = [_shorten(ids[i]) for i in order]
    width = min(16.0, max(6.4, 0.45 * len(labels)))
    fig, ax = plt.subplots(figsize=(width, 4.8))
    ax.bar(range(len(labels)), scores, color="#4878a8")
    ax.axhline(1.0, color="#888888", linestyle="--", linewidth=1.0)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=8)
    ax.set_ylabel("originality score")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_heatmap_figure(grid: HeatmapGrid, path, points=None) -> str:
    """Image of a probe-score grid; fixed points are overlaid when given."""
    (x0, x1), (y0, y1) = grid.bounds
    fig, ax = plt.subplots(figsize=(6.4, 5.6))
    image = ax.imshow(
        grid.values.T,
        origin="lower",
        extent=(x0, x1, y0, y1),
        aspect="auto",
        cmap="viridis",
    )
    if points is not None:
        pts = np.asarray(points, dtype=float)
        ax.scatter(pts[:, 0], pts[:, 1], s=14, c="white", edgecolors="black", linewidths=0.5)
    fig.colorbar(image, ax=ax, label="originality score")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_correlation_figure(a, b, labels: tuple[str, str], path) -> str:
    """Scatter of paired scores with a least-squares trend line."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    fig, ax = plt.subplots(figsize=(5.6, 5.6))
    ax.scatter(a, b, s=18, color="#4878a8")
    slope, intercept = np.polyfit(a, b, 1)
    ends = np.array([a.min(), a.max()])
    ax.plot(ends, slope * ends + intercept, color="#888888", linewidth=1.0)
    ax.set_xlabel(labels[0])
    ax.set_ylabel(labels[1])
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def _shorten(label: str, limit: int = 24) -> str:
    return label if len(label) <= limit else label[: limit - 3] + "..."
