"""Hierarchical split/exchange/merge clustering over probability spaces.

The pipeline starts from a two-way partition of the data by vector norm,
fits a probability space per region, lets adjacent regions trade points
by point-to-space distance, merges regions whose spaces sit at distance
zero, and keeps bisecting by norm until a target count, the level cap, or
unsplittable regions stop it. Everything is a pure function of the inputs,
so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import EmptyInputError, DimensionMismatchError, InvalidKError, NotFittedError
from .fit import SdlConfig, fit_max_prob_space
from .metric import (
    FeatVec,
    ProbSpace,
    _clamped_row_distances,
    as_matrix,
    dataset_fingerprint,
    point_space_distance,
    space_space_distance,
)


@dataclass(frozen=True)
class Region:
    """A cluster in progress: member indices plus its fitted space (if any)."""

    id: int
    members: tuple[int, ...]
    space: ProbSpace | None

    def __post_init__(self) -> None:
        members = tuple(sorted(int(m) for m in self.members))
        if not members:
            raise ValueError("a region must have at least one member")
        if members[0] < 0:
            raise ValueError("member indices must be non-negative")
        if len(set(members)) != len(members):
            raise ValueError("member indices must be unique")
        object.__setattr__(self, "members", members)
        if self.space is not None and self.space.count != len(members):
            raise ValueError(
                f"fitted space count {self.space.count} != member count {len(members)}"
            )

    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class MergeEvent:
    """One region absorbed by another at the recorded space distance."""

    survivor: int
    absorbed: int
    distance: float


@dataclass(frozen=True)
class EngineConfig:
    """Knobs of the clustering pipeline.

    ``target_k`` stops the loop once the cluster count is at most that
    demand; ``max_levels`` caps the number of bisection levels (so at most
    2**max_levels clusters); ``merge_enabled`` controls zero-distance
    merging; ``sdl`` configures the per-region fits.
    """

    target_k: int | None = None
    max_levels: int = 6
    merge_enabled: bool = True
    sdl: SdlConfig = field(default_factory=SdlConfig)

    def __post_init__(self) -> None:
        if self.max_levels < 1:
            raise ValueError(f"max_levels must be >= 1, got {self.max_levels}")
        if self.target_k is not None and self.target_k < 1:
            raise ValueError(f"target_k must be >= 1, got {self.target_k}")


@dataclass(frozen=True)
class ClusterModel:
    """Final clustering: fitted regions, merge history, config, data hash."""

    regions: tuple[Region, ...]
    dim: int
    merge_log: tuple[MergeEvent, ...]
    config: EngineConfig
    dataset_fingerprint: str

    def __post_init__(self) -> None:
        ids = [r.id for r in self.regions]
        if len(set(ids)) != len(ids):
            raise ValueError("region ids must be unique")
        seen: set[int] = set()
        total = 0
        for r in self.regions:
            if r.space is None:
                raise NotFittedError(f"region {r.id} has no fitted space")
            if r.space.dim != self.dim:
                raise DimensionMismatchError(
                    f"region {r.id} space dimension {r.space.dim} != model dimension {self.dim}"
                )
            overlap = seen.intersection(r.members)
            if overlap:
                raise ValueError(f"indices assigned to multiple regions: {sorted(overlap)[:5]}")
            seen.update(r.members)
            total += len(r.members)
        if seen and (min(seen) != 0 or max(seen) != total - 1):
            raise ValueError("region members must partition the contiguous index range")

    @property
    def n_points(self) -> int:
        return sum(r.size() for r in self.regions)

    def membership(self) -> np.ndarray:
        """Region id owning each dataset index, as an int array."""
        out = np.empty(self.n_points, dtype=np.int64)
        for r in self.regions:
            out[list(r.members)] = r.id
        return out


class Assignment(NamedTuple):
    """Result of assigning a vector to its nearest region."""

    region_id: int
    distance: float
    inside: bool


def _norms(X: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(X * X, axis=1))


def _fit_region(X: np.ndarray, region_id: int, members: Sequence[int], cfg: SdlConfig) -> Region:
    idx = np.asarray(sorted(members), dtype=np.int64)
    space, _ = fit_max_prob_space(X[idx], cfg)
    return Region(id=region_id, members=tuple(int(i) for i in idx), space=space)


def initial_partition(points: "np.ndarray | Sequence[FeatVec]", k: int) -> list[Region]:
    """Partition indices into k contiguous blocks of the norm-sorted order.

    Block sizes differ by at most one (earlier blocks take the extra);
    ties in norm keep index order. Regions come back unfitted.

    Raises:
        InvalidKError: k < 1 or k > number of points.
    """
    X = as_matrix(points)
    n = X.shape[0]
    if k < 1 or k > n:
        raise InvalidKError(f"k must be in [1, {n}], got {k}")
    order = np.argsort(_norms(X), kind="stable")
    base, extra = divmod(n, k)
    regions: list[Region] = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        block = order[start : start + size]
        regions.append(Region(id=i, members=tuple(int(j) for j in block), space=None))
        start += size
    return regions


def boundary_exchange(
    points: "np.ndarray | Sequence[FeatVec]",
    a: Region,
    b: Region,
    cfg: SdlConfig,
) -> tuple[Region | None, Region | None]:
    """Trade the members of two adjacent regions by point-to-space distance.

    Every vector of the combined pool goes to ``a`` when it is strictly
    closer to ``a``'s space, otherwise (ties included) to ``b``; both
    regions are then refit on their new memberships. A region left empty
    is dissolved (returned as None) and its sibling keeps the whole pool.

    Raises:
        NotFittedError: Either region has no fitted space.
    """
    if a.space is None or b.space is None:
        raise NotFittedError("boundary exchange requires fitted regions")
    X = as_matrix(points)
    pool = np.asarray(sorted(a.members + b.members), dtype=np.int64)
    rows = X[pool]
    da = _clamped_row_distances(rows, a.space.center_array(), a.space.scale_array())
    db = _clamped_row_distances(rows, b.space.center_array(), b.space.scale_array())
    closer_a = da < db
    to_a = pool[closer_a]
    to_b = pool[~closer_a]
    if to_a.size == 0:
        return None, _fit_region(X, b.id, to_b, cfg)
    if to_b.size == 0:
        return _fit_region(X, a.id, to_a, cfg), None
    return _fit_region(X, a.id, to_a, cfg), _fit_region(X, b.id, to_b, cfg)


def split_all(
    points: "np.ndarray | Sequence[FeatVec]",
    regions: Sequence[Region],
    next_id: int,
) -> tuple[list[Region], int]:
    """Bisect each region at the median of its member norms.

    Children come back unfitted, in (low, high) order, with fresh ids; odd
    sizes put the extra member in the low half. Single-member regions are
    carried forward untouched.
    """
    X = as_matrix(points)
    norms = _norms(X)
    out: list[Region] = []
    for region in regions:
        if region.size() == 1:
            out.append(region)
            continue
        idx = np.asarray(region.members, dtype=np.int64)
        order = idx[np.argsort(norms[idx], kind="stable")]
        cut = (order.size + 1) // 2
        low, high = order[:cut], order[cut:]
        out.append(Region(id=next_id, members=tuple(int(i) for i in low), space=None))
        out.append(Region(id=next_id + 1, members=tuple(int(i) for i in high), space=None))
        next_id += 2
    return out, next_id


def merge_overlapping(
    points: "np.ndarray | Sequence[FeatVec]",
    regions: Sequence[Region],
    cfg: SdlConfig,
) -> tuple[list[Region], list[MergeEvent]]:
    """Merge every connected component of regions at space distance zero.

    Zero-distance pairs form graph edges; each component collapses into
    one region (members unioned, space refit) surviving under the
    smallest id of the component. Refits can create new overlaps, so the
    pass repeats until no zero-distance pair remains.

    Raises:
        NotFittedError: Any region has no fitted space.
    """
    regs = list(regions)
    for r in regs:
        if r.space is None:
            raise NotFittedError(f"region {r.id} has no fitted space")
    X = as_matrix(points)
    events: list[MergeEvent] = []

    while len(regs) > 1:
        parent = list(range(len(regs)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        any_zero = False
        for i in range(len(regs)):
            for j in range(i + 1, len(regs)):
                if space_space_distance(regs[i].space, regs[j].space) == 0.0:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[max(ri, rj)] = min(ri, rj)
                    any_zero = True
        if not any_zero:
            break

        components: dict[int, list[int]] = {}
        for i in range(len(regs)):
            components.setdefault(find(i), []).append(i)

        merged: list[Region] = []
        for root in sorted(components):
            positions = components[root]
            if len(positions) == 1:
                merged.append(regs[positions[0]])
                continue
            ids = sorted(regs[p].id for p in positions)
            survivor = ids[0]
            members: list[int] = []
            for p in positions:
                members.extend(regs[p].members)
            for absorbed in ids[1:]:
                events.append(MergeEvent(survivor=survivor, absorbed=absorbed, distance=0.0))
            merged.append(_fit_region(X, survivor, members, cfg))
        regs = merged
    return regs, events


def cluster(points: "np.ndarray | Sequence[FeatVec]", cfg: EngineConfig) -> ClusterModel:
    """Run the full clustering pipeline and return the final model.

    Each level fits any unfitted regions, sweeps one boundary exchange
    over every adjacent pair in order, merges zero-distance regions (when
    enabled), then either stops (count at most ``target_k``, level cap
    hit, or every region down to two members) or bisects all regions and
    continues. Deterministic for fixed inputs and config.

    Raises:
        EmptyInputError: No points.
        DimensionMismatchError: Points of mixed dimension.
    """
    X = as_matrix(points)
    n = X.shape[0]
    k0 = 2 if n >= 2 else 1
    regions: list[Region] = initial_partition(X, k0)
    next_id = k0
    merge_log: list[MergeEvent] = []

    for level in range(1, cfg.max_levels + 1):
        regions = [
            r if r.space is not None else _fit_region(X, r.id, r.members, cfg.sdl)
            for r in regions
        ]
        i = 0
        while i < len(regions) - 1:
            new_a, new_b = boundary_exchange(X, regions[i], regions[i + 1], cfg.sdl)
            if new_a is None:
                regions[i : i + 2] = [new_b]
            elif new_b is None:
                regions[i : i + 2] = [new_a]
            else:
                regions[i], regions[i + 1] = new_a, new_b
                i += 1
        if cfg.merge_enabled:
            regions, events = merge_overlapping(X, regions, cfg.sdl)
            merge_log.extend(events)
        if cfg.target_k is not None and len(regions) <= cfg.target_k:
            break
        if level == cfg.max_levels:
            break
        if all(r.size() <= 2 for r in regions):
            break
        regions, next_id = split_all(X, regions, next_id)

    return ClusterModel(
        regions=tuple(regions),
        dim=int(X.shape[1]),
        merge_log=tuple(merge_log),
        config=cfg,
        dataset_fingerprint=dataset_fingerprint(X),
    )


def assign(v: FeatVec, model: ClusterModel) -> Assignment:
    """Map a vector to the region with the smallest point-to-space distance.

    Ties go to the smallest region id; ``inside`` is true only for an
    exact zero distance.

    Raises:
        DimensionMismatchError: Vector width differs from the model's.
    """
    if v.dim != model.dim:
        raise DimensionMismatchError(f"vector dimension {v.dim} != model dimension {model.dim}")
    best_id = -1
    best_d = float("inf")
    for region in sorted(model.regions, key=lambda r: r.id):
        d = point_space_distance(v, region.space)
        if d < best_d:
            best_id, best_d = region.id, d
    return Assignment(region_id=best_id, distance=best_d, inside=best_d == 0.0)


def assign_many(
    points: "np.ndarray | Sequence[FeatVec]", model: ClusterModel
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized assign over many points: (region ids, distances)."""
    X = as_matrix(points, dim=model.dim)
    ordered = sorted(model.regions, key=lambda r: r.id)
    dists = np.stack(
        [
            _clamped_row_distances(X, r.space.center_array(), r.space.scale_array())
            for r in ordered
        ]
    )
    pick = np.argmin(dists, axis=0)  # first minimum, so smallest id wins ties
    ids = np.asarray([r.id for r in ordered], dtype=np.int64)[pick]
    return ids, dists[pick, np.arange(X.shape[0])]
