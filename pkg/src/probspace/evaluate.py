"""Clustering quality metrics, a plain k-means baseline, and the dimension sweep.

The sweep quantifies how the scale-clamped metric behaves as feature
width grows: two 6-sigma-separated components are replicated across more
and more dimensions, and each run records how much of a cluster falls at
distance zero to its own space and how far apart the cluster spaces stay.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .engine import EngineConfig, cluster
from .data import MixtureComponent, MixtureSpec, generate_mixture
from .errors import InvalidKError
from .metric import _clamped_row_distances, as_matrix, space_space_distance


@dataclass(frozen=True)
class SweepRow:
    """One dimension-sweep cell: width, zero-distance fraction, separation."""

    dim: int
    zero_fraction: float
    min_between_distance: float
    cluster_count: int


@dataclass(frozen=True)
class EvalReport:
    """External-validity scores for one clustering, plus optional sweep rows."""

    ari: float
    purity: float
    cluster_count: int
    sweep: tuple[SweepRow, ...] = ()

    def __post_init__(self) -> None:
        if not (0.0 <= self.purity <= 1.0):
            raise ValueError(f"purity must be in [0, 1], got {self.purity}")
        if self.cluster_count < 1:
            raise ValueError(f"cluster_count must be >= 1, got {self.cluster_count}")


def _check_labelings(pred: Sequence[int], true: Sequence[int], min_len: int) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(pred)
    t = np.asarray(true)
    if p.shape != t.shape or p.ndim != 1:
        raise ValueError(f"labelings must be equal-length 1-D, got {p.shape} and {t.shape}")
    if p.size < min_len:
        raise ValueError(f"need at least {min_len} labels, got {p.size}")
    return p, t


def _contingency(pred: np.ndarray, true: np.ndarray) -> np.ndarray:
    _, p_codes = np.unique(pred, return_inverse=True)
    _, t_codes = np.unique(true, return_inverse=True)
    n_p = int(p_codes.max()) + 1
    n_t = int(t_codes.max()) + 1
    table = np.zeros((n_p, n_t), dtype=np.int64)
    np.add.at(table, (p_codes, t_codes), 1)
    return table


def adjusted_rand_index(pred: Sequence[int], true: Sequence[int]) -> float:
    """Chance-corrected pair-counting agreement between two labelings.

    Invariant under any relabeling of either side; 1.0 for identical
    partitions, ~0.0 for independent ones. When both partitions are
    trivially identical (the correction denominator vanishes) the score
    is 1.0 by convention.
    """
    p, t = _check_labelings(pred, true, min_len=2)
    table = _contingency(p, t)
    n = p.size

    def comb2(x: np.ndarray) -> np.ndarray:
        return x * (x - 1) / 2.0

    sum_ij = comb2(table).sum()
    sum_a = comb2(table.sum(axis=1)).sum()
    sum_b = comb2(table.sum(axis=0)).sum()
    total = comb2(np.asarray(n, dtype=np.float64))
    expected = sum_a * sum_b / total
    max_index = (sum_a + sum_b) / 2.0
    denom = max_index - expected
    if denom == 0.0:
        return 1.0
    return float((sum_ij - expected) / denom)


def purity(pred: Sequence[int], true: Sequence[int]) -> float:
    """Fraction of points in their predicted cluster's majority class.

    Degenerately inflated by fine partitions: all-singleton predictions
    score 1.0 regardless of structure.
    """
    p, t = _check_labelings(pred, true, min_len=1)
    table = _contingency(p, t)
    return float(table.max(axis=1).sum() / p.size)


def _lloyd(X: np.ndarray, centers: np.ndarray, iters: int) -> tuple[np.ndarray, list[float]]:
    """Plain Lloyd iterations; returns final labels and the per-step costs."""
    k = centers.shape[0]
    costs: list[float] = []
    labels = np.zeros(X.shape[0], dtype=np.int64)
    for _ in range(iters):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=-1)
        labels = np.argmin(d2, axis=1)
        costs.append(float(d2[np.arange(X.shape[0]), labels].sum()))
        new_centers = centers.copy()
        for c in range(k):
            mask = labels == c
            if mask.any():
                new_centers[c] = X[mask].mean(axis=0)
        if np.array_equal(new_centers, centers):
            break
        centers = new_centers
    d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=-1)
    labels = np.argmin(d2, axis=1)
    return labels, costs


def kmeans_baseline(
    points: "np.ndarray | Sequence", k: int, seed: int, iters: int = 100
) -> np.ndarray:
    """Deliberately plain k-means: seeded random distinct initial centers,
    capped Lloyd iterations, ties to the lowest center index, empty
    clusters keep their previous center. Deterministic per seed.

    Raises:
        InvalidKError: k outside [1, number of points].
    """
    X = as_matrix(points)
    n = X.shape[0]
    if k < 1 or k > n:
        raise InvalidKError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    init = rng.choice(n, size=k, replace=False)
    labels, _ = _lloyd(X, X[np.sort(init)].copy(), iters)
    return labels


def dimension_sweep(
    dims: Sequence[int],
    template: MixtureSpec,
    engine_cfg: EngineConfig,
) -> list[SweepRow]:
    """Replicate a 1-D two-component template across widths and cluster each.

    The template must hold exactly two one-dimensional components (their
    separation is replicated in every dimension). Per width d the sweep
    generates the mixture, clusters it, and records the fraction of points
    at distance zero to their own cluster's space and the minimum pairwise
    between-cluster space distance (infinity when one cluster remains).
    Rows come back in ``dims`` order.
    """
    if not dims:
        raise ValueError("dims must be non-empty")
    if len(template.components) != 2:
        raise ValueError(f"template must define exactly 2 components, got {len(template.components)}")
    if template.dim != 1:
        raise ValueError(f"template components must be 1-D, got dim {template.dim}")

    rows: list[SweepRow] = []
    for d in dims:
        if d < 1:
            raise ValueError(f"dims must be positive, got {d}")
        components = tuple(
            MixtureComponent(
                weight=c.weight,
                center=c.center * d,
                sigma=c.sigma * d,
            )
            for c in template.components
        )
        spec = MixtureSpec(components=components, n=template.n, seed=template.seed)
        dataset = generate_mixture(spec)
        X = dataset.matrix()
        model = cluster(X, engine_cfg)

        zero_hits = 0
        for region in model.regions:
            idx = np.asarray(region.members, dtype=np.int64)
            dist = _clamped_row_distances(
                X[idx], region.space.center_array(), region.space.scale_array()
            )
            zero_hits += int(np.count_nonzero(dist == 0.0))
        zero_fraction = zero_hits / X.shape[0]

        regions = model.regions
        if len(regions) < 2:
            min_between = float("inf")
        else:
            min_between = min(
                space_space_distance(regions[i].space, regions[j].space)
                for i in range(len(regions))
                for j in range(i + 1, len(regions))
            )
        rows.append(
            SweepRow(
                dim=int(d),
                zero_fraction=zero_fraction,
                min_between_distance=min_between,
                cluster_count=len(regions),
            )
        )
    return rows


def write_sweep_csv(rows: Sequence[SweepRow], path: "str | Path") -> None:
    """Write sweep rows as CSV with columns dim, zero_fraction, min_between_distance."""
    lines = ["dim,zero_fraction,min_between_distance"]
    for row in rows:
        lines.append(f"{row.dim},{row.zero_fraction!r},{row.min_between_distance!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def format_sweep_summary(rows: Sequence[SweepRow]) -> str:
    """Human-readable sweep table, one line per width."""
    lines = []
    for row in rows:
        lines.append(
            f"dim {row.dim:>4}: clusters={row.cluster_count} "
            f"zero_fraction={row.zero_fraction:.4f} "
            f"min_between_distance={row.min_between_distance:.6g}"
        )
    return "\n".join(lines)
