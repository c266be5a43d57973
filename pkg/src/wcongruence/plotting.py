"""Raster rendering of principal-line figures with matplotlib."""

from __future__ import annotations

from .bde import FlowFigure


def render_png(fig: FlowFigure, path, title: str = "", dpi: int = 150) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    figure, ax = plt.subplots(figsize=(5, 5))
    for branch, line in fig.polylines:
        xs, ys = zip(*line)
        if branch == 1:
            ax.plot(xs, ys, color="#1f4e9c", lw=0.7)
        else:
            ax.plot(xs, ys, color="#2a8a3e", lw=0.7, ls="--")
    for seg in fig.discriminant_curve:
        xs, ys = zip(*seg)
        ax.plot(xs, ys, color="#c0392b", lw=1.4)
    ax.plot(*fig.umbilic, "ko", ms=4)
    W = fig.window
    ax.set_xlim(-W, W)
    ax.set_ylim(-W, W)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    figure.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(figure)
