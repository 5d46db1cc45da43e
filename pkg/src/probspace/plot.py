"""2-D projection rendering of a fitted model over a dataset.

Multidimensional spaces are drawn in two chosen coordinates: points
colored by assigned region, one marker per projected region center, and
each region's per-dimension scale as an axis-aligned box. Projected boxes
may overlap even when the spaces are disjoint in full dimension.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .engine import ClusterModel, assign_many
from .errors import DimensionMismatchError
from .metric import as_matrix


def render_projection(
    model: ClusterModel,
    points: "np.ndarray | list",
    dims: tuple[int, int],
    out_path: "str | Path",
) -> None:
    """Render the projected scatter/centers/scale-boxes figure to a file.

    The output format follows the file extension (SVG recommended); each
    center marker carries the SVG gid ``region-center-<id>``.

    Raises:
        DimensionMismatchError: A projection index is outside the model's width.
    """
    j1, j2 = dims
    if j1 < 0 or j2 < 0:
        raise ValueError(f"projection indices must be non-negative, got {dims}")
    if j1 >= model.dim or j2 >= model.dim:
        raise DimensionMismatchError(
            f"projection indices {dims} out of range for dimension {model.dim}"
        )
    X = as_matrix(points, dim=model.dim)
    ids, _ = assign_many(X, model)

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Rectangle

    fig, ax = plt.subplots(figsize=(7, 6))
    cmap = plt.colormaps["tab20"]
    ordered = sorted(model.regions, key=lambda r: r.id)
    for pos, region in enumerate(ordered):
        color = cmap(pos % 20)
        mask = ids == region.id
        ax.scatter(X[mask, j1], X[mask, j2], s=8, alpha=0.5, color=color, linewidths=0)
        cx, cy = region.space.center.values[j1], region.space.center.values[j2]
        sx, sy = region.space.scale[j1], region.space.scale[j2]
        ax.add_patch(
            Rectangle(
                (cx - sx, cy - sy), 2 * sx, 2 * sy,
                fill=False, edgecolor=color, linewidth=1.2,
            )
        )
        ax.scatter(
            [cx], [cy], marker="x", s=60, color=color,
            gid=f"region-center-{region.id}",
        )
    ax.set_xlabel(f"dimension {j1}")
    ax.set_ylabel(f"dimension {j2}")
    ax.set_title(f"{len(ordered)} regions projected onto dims ({j1}, {j2})")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
