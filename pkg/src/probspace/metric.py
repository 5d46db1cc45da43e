"""Probability-space types and the scale-clamped distance measure.

A probability space summarizes a cluster as a center vector (the maximum
probability value) plus a per-dimension non-negative probability scale.
Distances subtract the relevant scales coordinate by coordinate and clamp
at zero, so separations that fall inside the combined scales do not count.
The module also provides the triangle-vertex construction used to probe
the triangle inequality, and a seeded axiom checker.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DimensionMismatchError, EmptyInputError, InsufficientInputError

# Absolute tolerance for the empirical triangle-inequality checks. Clamped
# distances are compared exactly only where the formula forces exact zeros.
TRIANGLE_TOL = 1e-9

DegenerateCase = Literal["full", "one-edge-zero", "single-side"]

# A 2-D center paired with its scalar maximum probability scale.
ScaledPoint2D = tuple[Sequence[float], float]


@dataclass(frozen=True)
class FeatVec:
    """An ordered, finite, real-valued feature vector."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if len(vals) == 0:
            raise ValueError("FeatVec requires at least one value")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("FeatVec values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def dim(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)


@dataclass(frozen=True)
class ProbSpace:
    """A cluster model: center, per-dimension probability scale, sample count.

    The center is the maximum probability value of the space; ``scale[j]``
    is the probability scale along dimension j. Separations of at most
    ``scale[j]`` from the center count as zero along that dimension.
    """

    center: FeatVec
    scale: tuple[float, ...]
    count: int

    def __post_init__(self) -> None:
        scale = tuple(float(s) for s in self.scale)
        if len(scale) != self.center.dim:
            raise DimensionMismatchError(
                f"scale length {len(scale)} != center dimension {self.center.dim}"
            )
        if not all(math.isfinite(s) and s >= 0.0 for s in scale):
            raise ValueError("scale entries must be finite and non-negative")
        if self.count < 0:
            raise ValueError(f"count must be non-negative, got {self.count}")
        if self.count == 0 and any(s != 0.0 for s in scale):
            raise ValueError("a space fitted from zero samples must have zero scale")
        object.__setattr__(self, "scale", scale)

    @property
    def dim(self) -> int:
        return self.center.dim

    def center_array(self) -> np.ndarray:
        return self.center.as_array()

    def scale_array(self) -> np.ndarray:
        return np.asarray(self.scale, dtype=np.float64)

    @classmethod
    def from_arrays(cls, center: Sequence[float], scale: Sequence[float], count: int) -> "ProbSpace":
        return cls(center=FeatVec(tuple(center)), scale=tuple(scale), count=count)


@dataclass(frozen=True)
class TriangleVertices:
    """Effective triangle vertices between three scaled 2-D spaces.

    K sits in the gap between spaces a and b, F between b and c, and H
    between c and a. The degenerate case records how many clamped pairwise
    edges between the spaces collapsed to zero: none (``full``), exactly
    one (``one-edge-zero``), or two or more (``single-side``).
    """

    k: tuple[float, float]
    f: tuple[float, float]
    h: tuple[float, float]
    degenerate_case: DegenerateCase

    def __post_init__(self) -> None:
        for name in ("k", "f", "h"):
            pt = tuple(float(c) for c in getattr(self, name))
            if len(pt) != 2 or not all(math.isfinite(c) for c in pt):
                raise ValueError(f"vertex {name} must be a finite 2-D point")
            object.__setattr__(self, name, pt)

    def side_lengths(self) -> tuple[float, float, float]:
        """Euclidean side lengths (|KF|, |FH|, |HK|) of the vertex triangle."""
        return (
            math.dist(self.k, self.f),
            math.dist(self.f, self.h),
            math.dist(self.h, self.k),
        )


@dataclass(frozen=True)
class AxiomReport:
    """Violation counts from a seeded metric-axiom sampling run."""

    trials: int
    nonnegativity_violations: int
    symmetry_violations: int
    self_distance_violations: int
    triangle_violations: int

    @property
    def total_violations(self) -> int:
        return (
            self.nonnegativity_violations
            + self.symmetry_violations
            + self.self_distance_violations
            + self.triangle_violations
        )

    @property
    def ok(self) -> bool:
        return self.total_violations == 0


def as_matrix(
    points: "np.ndarray | Sequence[FeatVec] | Sequence[Sequence[float]]",
    *,
    dim: int | None = None,
) -> np.ndarray:
    """Stack points into an (N, dim) float64 matrix.

    Accepts a 2-D ndarray, a sequence of FeatVec, or a sequence of rows.

    Raises:
        EmptyInputError: No points.
        DimensionMismatchError: Rows of mixed width, or width != ``dim``.
        ValueError: Non-finite entries.
    """
    if isinstance(points, np.ndarray):
        if points.ndim != 2:
            raise DimensionMismatchError(f"expected a 2-D matrix, got ndim={points.ndim}")
        X = np.asarray(points, dtype=np.float64)
    else:
        rows = [p.values if isinstance(p, FeatVec) else tuple(p) for p in points]
        if not rows:
            raise EmptyInputError("no points given")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise DimensionMismatchError(f"points of mixed dimensions: {sorted(widths)}")
        X = np.asarray(rows, dtype=np.float64)
    if X.shape[0] == 0:
        raise EmptyInputError("no points given")
    if X.shape[1] == 0:
        raise DimensionMismatchError("points must have at least one dimension")
    if not np.all(np.isfinite(X)):
        raise ValueError("points contain non-finite values")
    if dim is not None and X.shape[1] != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {X.shape[1]}")
    return X


def dataset_fingerprint(points: "np.ndarray | Sequence[FeatVec]") -> str:
    """Content hash (sha256 hex) of a point matrix, byte-stable across runs."""
    X = as_matrix(points)
    h = hashlib.sha256()
    h.update(b"probspace.dataset.v1")
    h.update(np.int64(X.shape[0]).tobytes())
    h.update(np.int64(X.shape[1]).tobytes())
    h.update(np.ascontiguousarray(X, dtype="<f8").tobytes())
    return h.hexdigest()


def _clamped_row_distances(X: np.ndarray, center: np.ndarray, scale: np.ndarray) -> np.ndarray:
    """Clamped distance from each row of X to a center with per-dim scales."""
    d = np.abs(X - center)
    d -= scale
    np.maximum(d, 0.0, out=d)
    return np.sqrt(np.sum(d * d, axis=-1))


def scale_from_samples(points: "Sequence[FeatVec] | np.ndarray", center: FeatVec) -> list[float]:
    """Per-dimension probability scale of a sample about a center.

    The scale along dimension j is the mean absolute deviation of the
    sample's j-th coordinates from ``center[j]`` (the probability-weighted
    shell sum in its continuum form). An empty sample has zero scale.

    Raises:
        DimensionMismatchError: Any point disagrees with the center's width.
    """
    if len(points) == 0:
        return [0.0] * center.dim
    X = as_matrix(points, dim=center.dim)
    return [float(v) for v in np.mean(np.abs(X - center.as_array()), axis=0)]


def point_space_distance(r: FeatVec, s: ProbSpace) -> float:
    """Distance Dp from a feature vector to a probability space.

    Per dimension, a separation of at most ``scale[j]`` contributes zero;
    anything beyond contributes the overshoot. Contributions combine as a
    Euclidean norm, so the result is always non-negative.
    """
    if r.dim != s.dim:
        raise DimensionMismatchError(f"point dimension {r.dim} != space dimension {s.dim}")
    return float(_clamped_row_distances(r.as_array()[None, :], s.center_array(), s.scale_array())[0])


def space_space_distance(v: ProbSpace, w: ProbSpace) -> float:
    """Distance G between two probability spaces.

    Identical to the point-to-space form, except the per-dimension
    threshold is the *sum* of the two scales. Symmetric in its arguments
    bit for bit, and exactly zero when every coordinate gap fits inside
    the combined scales.
    """
    if v.dim != w.dim:
        raise DimensionMismatchError(f"space dimensions differ: {v.dim} != {w.dim}")
    combined = v.scale_array() + w.scale_array()
    return float(
        _clamped_row_distances(w.center_array()[None, :], v.center_array(), combined)[0]
    )


def _gap_midpoint(u: float, mu: float, t: float, mt: float) -> float:
    """Midpoint of the gap between 1-D intervals [u +/- mu] and [t +/- mt].

    When the coordinate gap is inside either scale, both scales are treated
    as zero and the plain midpoint is returned.
    """
    if abs(u - t) <= mu or abs(u - t) <= mt:
        return (u + t) / 2.0
    if u < t:
        return ((u + mu) + (t - mt)) / 2.0
    return ((u - mu) + (t + mt)) / 2.0


def _scaled_point(p: ScaledPoint2D, name: str) -> tuple[float, float, float]:
    (center, m) = p
    c = tuple(float(v) for v in center)
    m = float(m)
    if len(c) != 2 or not all(math.isfinite(v) for v in c):
        raise ValueError(f"{name}: center must be a finite 2-D point")
    if not (math.isfinite(m) and m >= 0.0):
        raise ValueError(f"{name}: scale must be finite and non-negative")
    return c[0], c[1], m


def _pairwise_clamped_edge(x1: float, y1: float, m1: float, x2: float, y2: float, m2: float) -> float:
    dx = max(0.0, abs(x1 - x2) - (m1 + m2))
    dy = max(0.0, abs(y1 - y2) - (m1 + m2))
    return math.hypot(dx, dy)


def triangle_vertices(a: ScaledPoint2D, b: ScaledPoint2D, c: ScaledPoint2D) -> TriangleVertices:
    """Effective triangle vertices for three scaled 2-D spaces.

    Each vertex coordinate is the midpoint of the gap between the facing
    interval edges of the corresponding space pair; where the coordinate
    gap lies inside either scale, both scales are zeroed for that
    coordinate before taking the midpoint. With all scales zero the result
    is the medial triangle of the three centers.
    """
    ax, ay, ma = _scaled_point(a, "a")
    bx, by, mb = _scaled_point(b, "b")
    cx, cy, mc = _scaled_point(c, "c")

    k = (_gap_midpoint(ax, ma, bx, mb), _gap_midpoint(ay, ma, by, mb))
    f = (_gap_midpoint(bx, mb, cx, mc), _gap_midpoint(by, mb, cy, mc))
    h = (_gap_midpoint(cx, mc, ax, ma), _gap_midpoint(cy, mc, ay, ma))

    edges = (
        _pairwise_clamped_edge(ax, ay, ma, bx, by, mb),
        _pairwise_clamped_edge(bx, by, mb, cx, cy, mc),
        _pairwise_clamped_edge(cx, cy, mc, ax, ay, ma),
    )
    zeros = sum(1 for e in edges if e == 0.0)
    if zeros == 0:
        case: DegenerateCase = "full"
    elif zeros == 1:
        case = "one-edge-zero"
    else:
        case = "single-side"
    return TriangleVertices(k=k, f=f, h=h, degenerate_case=case)


def triangle_edge_lengths(
    a: ScaledPoint2D, b: ScaledPoint2D, c: ScaledPoint2D
) -> tuple[float, float, float]:
    """Reported clamped edge lengths (ab, bc, ca) between three scaled spaces.

    Raw edges are the pairwise clamped distances. Degenerate adjustments:
    with exactly one zero edge, the two surviving edges collapse to their
    common (shorter) value; with two zero edges only one side exists, and
    its length is also reported for the edge that shares the surviving
    pair's first space. With all edges zero the result is all zeros.
    """
    ax, ay, ma = _scaled_point(a, "a")
    bx, by, mb = _scaled_point(b, "b")
    cx, cy, mc = _scaled_point(c, "c")
    raw = [
        _pairwise_clamped_edge(ax, ay, ma, bx, by, mb),
        _pairwise_clamped_edge(bx, by, mb, cx, cy, mc),
        _pairwise_clamped_edge(cx, cy, mc, ax, ay, ma),
    ]
    zero_at = [i for i, e in enumerate(raw) if e == 0.0]
    if len(zero_at) == 1:
        nonzero = [e for e in raw if e != 0.0]
        shared = min(nonzero)
        out = [0.0 if e == 0.0 else shared for e in raw]
        return out[0], out[1], out[2]
    if len(zero_at) == 2:
        pos = next(i for i, e in enumerate(raw) if e != 0.0)
        out = [0.0, 0.0, 0.0]
        out[pos] = raw[pos]
        # Edge (pos + 2) % 3 shares the surviving pair's first space.
        out[(pos + 2) % 3] = raw[pos]
        return out[0], out[1], out[2]
    return raw[0], raw[1], raw[2]


def check_metric_axioms(spaces: Sequence[ProbSpace], trials: int, seed: int) -> AxiomReport:
    """Sample space pairs/triples and count metric-axiom violations.

    Per trial, three distinct spaces are drawn and checked for
    non-negativity, exact symmetry, exact zero self-distance, and the
    triangle inequality within ``TRIANGLE_TOL``. The clamp can in
    principle create zero-distance plateaus that break the triangle
    inequality; any such case is counted, never masked.

    Raises:
        InsufficientInputError: Fewer than three spaces.
        ValueError: ``trials`` < 1.
        DimensionMismatchError: Spaces of mixed dimension.
    """
    pool = list(spaces)
    if len(pool) < 3:
        raise InsufficientInputError(f"need at least 3 spaces, got {len(pool)}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    dims = {s.dim for s in pool}
    if len(dims) != 1:
        raise DimensionMismatchError(f"spaces of mixed dimensions: {sorted(dims)}")

    rng = np.random.default_rng(seed)
    nonneg = symmetry = self_dist = triangle = 0
    for _ in range(trials):
        i, j, k = (int(x) for x in rng.choice(len(pool), size=3, replace=False))
        g_ij = space_space_distance(pool[i], pool[j])
        g_ji = space_space_distance(pool[j], pool[i])
        if g_ij < 0.0:
            nonneg += 1
        if g_ij != g_ji:
            symmetry += 1
        if space_space_distance(pool[i], pool[i]) != 0.0:
            self_dist += 1
        g_jk = space_space_distance(pool[j], pool[k])
        g_ik = space_space_distance(pool[i], pool[k])
        if g_ij + g_jk < g_ik - TRIANGLE_TOL:
            triangle += 1
    return AxiomReport(
        trials=trials,
        nonnegativity_violations=nonneg,
        symmetry_violations=symmetry,
        self_distance_violations=self_dist,
        triangle_violations=triangle,
    )


def sample_spaces(
    count: int,
    dim: int,
    seed: int,
    *,
    center_span: float = 10.0,
    max_scale: float = 0.25,
) -> list[ProbSpace]:
    """Seeded random probability spaces for axiom checking.

    Centers are uniform over [0, center_span] per dimension and scales
    uniform over [0, max_scale]; the default scale bound keeps typical
    pairwise separations well outside the combined scales.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.0, center_span, size=(count, dim))
    scales = rng.uniform(0.0, max_scale, size=(count, dim))
    return [ProbSpace.from_arrays(centers[i], scales[i], count=1) for i in range(count)]


def triangle_construction_violations(trials: int, seed: int) -> int:
    """Count triangle-inequality violations of sampled vertex constructions.

    Per trial, three random scaled 2-D spaces are drawn (scales span small
    to overlapping so all degenerate cases occur) and all three cyclic
    inequalities on the vertex triangle's side lengths are checked within
    ``TRIANGLE_TOL``.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    violations = 0
    for _ in range(trials):
        centers = rng.uniform(-5.0, 5.0, size=(3, 2))
        if rng.random() < 0.3:
            scales = rng.uniform(0.0, 6.0, size=3)
        else:
            scales = rng.uniform(0.0, 1.0, size=3)
        tv = triangle_vertices(
            (tuple(centers[0]), float(scales[0])),
            (tuple(centers[1]), float(scales[1])),
            (tuple(centers[2]), float(scales[2])),
        )
        kf, fh, hk = tv.side_lengths()
        if kf + fh < hk - TRIANGLE_TOL or fh + hk < kf - TRIANGLE_TOL or hk + kf < fh - TRIANGLE_TOL:
            violations += 1
    return violations
