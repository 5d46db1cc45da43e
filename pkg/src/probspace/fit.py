"""Mode-and-scale fitting of a probability space via bounded migration rounds.

One fit alternates two steps under hard caps: a migration step recenters
the estimate at the mean of the points inside the current per-dimension
scale window, and a convergence step recomputes the scale about the new
center. Iteration stops early once the squared center movement drops to
the tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, EmptyRegionError
from .metric import FeatVec, ProbSpace, as_matrix, scale_from_samples


@dataclass(frozen=True)
class SdlConfig:
    """Iteration caps and tolerance for the migration/convergence fit.

    ``delta`` bounds the squared center movement below which the fit is
    converged; ``max_migrations`` caps recentering steps per round;
    ``max_convergences`` caps scale-recompute rounds; ``mu`` is a global
    budget on migration steps across all rounds. ``seed`` feeds any
    sampling a caller layers on top; the fit itself is deterministic.
    """

    delta: float = 1e-8
    max_migrations: int = 3
    max_convergences: int = 1
    mu: int = 50
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.delta > 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        for name in ("max_migrations", "max_convergences", "mu"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")


@dataclass(frozen=True)
class FitTrace:
    """Diagnostics of one fit: centers visited and how the loop ended."""

    iterations: int
    center_history: tuple[FeatVec, ...]
    converged: bool

    def __post_init__(self) -> None:
        if self.iterations != len(self.center_history) - 1:
            raise ValueError(
                f"iterations ({self.iterations}) must equal "
                f"len(center_history) - 1 ({len(self.center_history) - 1})"
            )


def has_converged(a_prev: FeatVec, a_next: FeatVec, delta: float) -> bool:
    """True iff the squared Euclidean center movement is at most delta."""
    if a_prev.dim != a_next.dim:
        raise DimensionMismatchError(f"center dimensions differ: {a_prev.dim} != {a_next.dim}")
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    diff = a_prev.as_array() - a_next.as_array()
    return float(np.sum(diff * diff)) <= delta


def fit_max_prob_space(
    points: "np.ndarray | list[FeatVec]", cfg: SdlConfig
) -> tuple[ProbSpace, FitTrace]:
    """Fit the maximum probability space of a point set.

    Starts from the coordinate-wise median with the mean absolute
    deviation about it as the initial scale window. Each migration step
    moves the center to the mean of the points falling inside the window
    in every dimension (the full-sample mean when the window is empty);
    each round ends by recomputing the scale about the current center.
    Stops when the squared center movement is at most ``cfg.delta``, or
    when the caps run out.

    Returns:
        The fitted space (count = number of points) and a FitTrace.

    Raises:
        EmptyRegionError: No points.
        DimensionMismatchError: Points of mixed dimension.
    """
    if len(points) == 0:
        raise EmptyRegionError("cannot fit a probability space from zero points")
    X = as_matrix(points)

    center = np.median(X, axis=0)
    scale = np.mean(np.abs(X - center), axis=0)
    history = [center.copy()]
    steps = 0
    converged = False

    for _ in range(cfg.max_convergences):
        for _ in range(cfg.max_migrations):
            if steps >= cfg.mu:
                break
            inside = np.all(np.abs(X - center) <= scale, axis=1)
            if inside.any():
                new_center = X[inside].mean(axis=0)
            else:
                new_center = X.mean(axis=0)
            steps += 1
            history.append(new_center.copy())
            moved_sq = float(np.sum((center - new_center) ** 2))
            center = new_center
            if moved_sq <= cfg.delta:
                converged = True
                break
        scale = np.asarray(scale_from_samples(X, FeatVec(tuple(center))), dtype=np.float64)
        if converged or steps >= cfg.mu:
            break

    space = ProbSpace.from_arrays(center, scale, count=int(X.shape[0]))
    trace = FitTrace(
        iterations=steps,
        center_history=tuple(FeatVec(tuple(c)) for c in history),
        converged=converged,
    )
    return space, trace
