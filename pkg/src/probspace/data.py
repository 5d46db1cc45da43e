"""Dataset ingestion, synthetic mixture generation, and model persistence.

CSV files carry one vector per row as comma-separated decimals, with an
optional header row and an optional trailing integer label column. Models
persist as versioned JSON with floats at full round-trip precision, so
read(write(m)) reproduces the model exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .engine import ClusterModel, EngineConfig, MergeEvent, Region
from .errors import (
    EmptyInputError,
    ModelFormatError,
    ModelVersionError,
    ParseError,
    SpecValidationError,
)
from .fit import SdlConfig
from .metric import FeatVec, ProbSpace, dataset_fingerprint

MODEL_FORMAT_VERSION = 1

# Width of the traffic-light feature vectors this library was sized for;
# nothing below depends on it, ingestion infers the width from the data.
DEFAULT_FEATURE_DIM = 18


@dataclass(frozen=True)
class Dataset:
    """Immutable vectors with optional ground-truth labels and provenance."""

    vectors: tuple[FeatVec, ...]
    labels: tuple[int, ...] | None
    source: str
    fingerprint: str

    def __post_init__(self) -> None:
        if not self.vectors:
            raise EmptyInputError("a dataset needs at least one vector")
        dims = {v.dim for v in self.vectors}
        if len(dims) != 1:
            raise ValueError(f"vectors of mixed dimensions: {sorted(dims)}")
        if self.labels is not None and len(self.labels) != len(self.vectors):
            raise ValueError(
                f"labels length {len(self.labels)} != vectors length {len(self.vectors)}"
            )

    @property
    def dim(self) -> int:
        return self.vectors[0].dim

    def __len__(self) -> int:
        return len(self.vectors)

    def matrix(self) -> np.ndarray:
        return np.asarray([v.values for v in self.vectors], dtype=np.float64)


def make_dataset(
    vectors: Sequence[FeatVec],
    labels: Sequence[int] | None = None,
    source: str = "memory",
) -> Dataset:
    """Build a Dataset, computing its content fingerprint."""
    vecs = tuple(vectors)
    if not vecs:
        raise EmptyInputError("a dataset needs at least one vector")
    return Dataset(
        vectors=vecs,
        labels=None if labels is None else tuple(int(t) for t in labels),
        source=source,
        fingerprint=dataset_fingerprint(vecs),
    )


@dataclass(frozen=True)
class MixtureComponent:
    """One Gaussian component: weight, center, and per-dimension sigma."""

    weight: float
    center: tuple[float, ...]
    sigma: tuple[float, ...]

    def __post_init__(self) -> None:
        center = tuple(float(c) for c in self.center)
        sigma = tuple(float(s) for s in self.sigma)
        if not (0.0 < self.weight <= 1.0):
            raise SpecValidationError(f"weight must be in (0, 1], got {self.weight}")
        if not center:
            raise SpecValidationError("component center must be non-empty")
        if len(sigma) != len(center):
            raise SpecValidationError(
                f"sigma length {len(sigma)} != center length {len(center)}"
            )
        if not all(math.isfinite(c) for c in center):
            raise SpecValidationError("component center must be finite")
        if not all(math.isfinite(s) and s > 0.0 for s in sigma):
            raise SpecValidationError("component sigmas must be finite and positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "sigma", sigma)

    @property
    def dim(self) -> int:
        return len(self.center)


@dataclass(frozen=True)
class MixtureSpec:
    """A Gaussian mixture to sample: components, total count, seed."""

    components: tuple[MixtureComponent, ...]
    n: int
    seed: int

    def __post_init__(self) -> None:
        if not self.components:
            raise SpecValidationError("a mixture needs at least one component")
        dims = {c.dim for c in self.components}
        if len(dims) != 1:
            raise SpecValidationError(f"components of mixed dimensions: {sorted(dims)}")
        total = sum(c.weight for c in self.components)
        if abs(total - 1.0) > 1e-9:
            raise SpecValidationError(f"component weights must sum to 1, got {total!r}")
        if self.n < 1:
            raise SpecValidationError(f"n must be >= 1, got {self.n}")

    @property
    def dim(self) -> int:
        return self.components[0].dim


def generate_mixture(spec: MixtureSpec) -> Dataset:
    """Sample a labeled dataset from a Gaussian mixture, deterministically.

    Component per sample follows the weights; coordinates are drawn as
    independent axis-aligned Gaussians. Labels record the generating
    component index.
    """
    rng = np.random.default_rng(spec.seed)
    weights = np.asarray([c.weight for c in spec.components], dtype=np.float64)
    weights = weights / weights.sum()
    comp = rng.choice(len(spec.components), size=spec.n, p=weights)
    z = rng.standard_normal(size=(spec.n, spec.dim))
    centers = np.asarray([c.center for c in spec.components], dtype=np.float64)
    sigmas = np.asarray([c.sigma for c in spec.components], dtype=np.float64)
    X = centers[comp] + sigmas[comp] * z
    vectors = tuple(FeatVec(tuple(row)) for row in X)
    return Dataset(
        vectors=vectors,
        labels=tuple(int(c) for c in comp),
        source=f"mixture(n={spec.n}, seed={spec.seed})",
        fingerprint=dataset_fingerprint(X),
    )


def read_csv(path: "str | Path", *, labels: bool = False) -> Dataset:
    """Read a dataset from CSV.

    Rows are comma-separated decimal numbers; a single leading header row
    is detected (any cell that is not a number) and skipped. With
    ``labels=True`` the final column is stripped as integer ground truth.

    Raises:
        EmptyInputError: No data rows.
        ParseError: Ragged rows or non-numeric cells, naming line/column.
    """
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()

    rows: list[tuple[float, ...]] = []
    labs: list[int] = []
    width: int | None = None
    saw_header = False
    for lineno, line in enumerate(lines, start=1):
        if line.strip() == "":
            if lineno == len(lines):
                continue
            raise ParseError(f"line {lineno}: empty row")
        cells = [c.strip() for c in line.split(",")]
        if not rows and not saw_header:
            try:
                [float(c) for c in cells]
            except ValueError:
                saw_header = True
                continue
        if width is None:
            width = len(cells)
            if labels and width < 2:
                raise ParseError(
                    f"line {lineno}: need at least 2 columns when a label column is expected"
                )
        elif len(cells) != width:
            raise ParseError(
                f"line {lineno}: expected {width} columns, found {len(cells)}"
            )
        feature_cells = cells[:-1] if labels else cells
        parsed: list[float] = []
        for col, cell in enumerate(feature_cells, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(f"line {lineno}, column {col}: not a number: {cell!r}") from None
            if not math.isfinite(value):
                raise ParseError(f"line {lineno}, column {col}: non-finite value: {cell!r}")
            parsed.append(value)
        if labels:
            cell = cells[-1]
            try:
                labs.append(int(cell))
            except ValueError:
                raise ParseError(
                    f"line {lineno}, column {width}: not an integer label: {cell!r}"
                ) from None
        rows.append(tuple(parsed))

    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    vectors = tuple(FeatVec(row) for row in rows)
    return Dataset(
        vectors=vectors,
        labels=tuple(labs) if labels else None,
        source=str(path),
        fingerprint=dataset_fingerprint(vectors),
    )


def write_csv(dataset: Dataset, path: "str | Path") -> None:
    """Write a dataset as CSV at full precision; labels, when present, go last."""
    lines = []
    for i, vec in enumerate(dataset.vectors):
        cells = [repr(v) for v in vec.values]
        if dataset.labels is not None:
            cells.append(str(dataset.labels[i]))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _model_to_doc(model: ClusterModel) -> dict[str, Any]:
    cfg = model.config
    return {
        "version": MODEL_FORMAT_VERSION,
        "dim": model.dim,
        "regions": [
            {
                "id": r.id,
                "center": list(r.space.center.values),
                "scale": list(r.space.scale),
                "count": r.space.count,
                "members": list(r.members),
            }
            for r in model.regions
        ],
        "merge_log": [[e.survivor, e.absorbed, e.distance] for e in model.merge_log],
        "config": {
            "target_k": cfg.target_k,
            "max_levels": cfg.max_levels,
            "merge_enabled": cfg.merge_enabled,
            "sdl": {
                "delta": cfg.sdl.delta,
                "max_migrations": cfg.sdl.max_migrations,
                "max_convergences": cfg.sdl.max_convergences,
                "mu": cfg.sdl.mu,
                "seed": cfg.sdl.seed,
            },
        },
        "dataset_fingerprint": model.dataset_fingerprint,
    }


def write_model(model: ClusterModel, path: "str | Path") -> None:
    """Persist a model as versioned JSON (full-precision floats, stable bytes)."""
    doc = _model_to_doc(model)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _expect(doc: dict[str, Any], key: str, kinds: "type | tuple[type, ...]", where: str) -> Any:
    if key not in doc:
        raise ModelFormatError(f"{where}.{key}: missing field")
    value = doc[key]
    if not isinstance(value, kinds):
        raise ModelFormatError(f"{where}.{key}: expected {kinds}, got {type(value).__name__}")
    return value


def read_model(path: "str | Path") -> ClusterModel:
    """Load a model produced by write_model.

    Raises:
        ModelVersionError: Unknown format version.
        ModelFormatError: Schema violations, naming the offending field path.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelFormatError(f"{path}: top-level document must be an object")

    version = _expect(doc, "version", (int, str), "model")
    if version != MODEL_FORMAT_VERSION:
        raise ModelVersionError(f"model.version: unsupported version {version!r}")

    dim = _expect(doc, "dim", int, "model")
    regions_doc = _expect(doc, "regions", list, "model")
    regions: list[Region] = []
    for i, rdoc in enumerate(regions_doc):
        where = f"model.regions[{i}]"
        if not isinstance(rdoc, dict):
            raise ModelFormatError(f"{where}: expected an object")
        rid = _expect(rdoc, "id", int, where)
        center = _expect(rdoc, "center", list, where)
        scale = _expect(rdoc, "scale", list, where)
        count = _expect(rdoc, "count", int, where)
        members = _expect(rdoc, "members", list, where)
        if len(center) != dim:
            raise ModelFormatError(f"{where}.center: expected {dim} entries, got {len(center)}")
        if len(scale) != dim:
            raise ModelFormatError(f"{where}.scale: expected {dim} entries, got {len(scale)}")
        try:
            space = ProbSpace.from_arrays(center, scale, count)
            regions.append(Region(id=rid, members=tuple(int(m) for m in members), space=space))
        except (ValueError, TypeError) as exc:
            raise ModelFormatError(f"{where}: {exc}") from exc

    merge_doc = _expect(doc, "merge_log", list, "model")
    merge_log: list[MergeEvent] = []
    for i, entry in enumerate(merge_doc):
        where = f"model.merge_log[{i}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise ModelFormatError(f"{where}: expected [survivor, absorbed, distance]")
        merge_log.append(
            MergeEvent(survivor=int(entry[0]), absorbed=int(entry[1]), distance=float(entry[2]))
        )

    cfg_doc = _expect(doc, "config", dict, "model")
    sdl_doc = _expect(cfg_doc, "sdl", dict, "model.config")
    try:
        sdl = SdlConfig(
            delta=float(_expect(sdl_doc, "delta", (int, float), "model.config.sdl")),
            max_migrations=_expect(sdl_doc, "max_migrations", int, "model.config.sdl"),
            max_convergences=_expect(sdl_doc, "max_convergences", int, "model.config.sdl"),
            mu=_expect(sdl_doc, "mu", int, "model.config.sdl"),
            seed=_expect(sdl_doc, "seed", int, "model.config.sdl"),
        )
        target_k = cfg_doc.get("target_k")
        if target_k is not None and not isinstance(target_k, int):
            raise ModelFormatError("model.config.target_k: expected int or null")
        config = EngineConfig(
            target_k=target_k,
            max_levels=_expect(cfg_doc, "max_levels", int, "model.config"),
            merge_enabled=_expect(cfg_doc, "merge_enabled", bool, "model.config"),
            sdl=sdl,
        )
    except ValueError as exc:
        raise ModelFormatError(f"model.config: {exc}") from exc

    fingerprint = _expect(doc, "dataset_fingerprint", str, "model")
    try:
        return ClusterModel(
            regions=tuple(regions),
            dim=dim,
            merge_log=tuple(merge_log),
            config=config,
            dataset_fingerprint=fingerprint,
        )
    except (ValueError, TypeError) as exc:
        raise ModelFormatError(f"model: {exc}") from exc
