"""Probability-space clustering.

Clusters are modeled as probability spaces: a center vector plus a
per-dimension scale inside of which distances count as zero. The engine
partitions data by vector norm, fits a space per region with a bounded
migration/convergence iteration, exchanges boundary points between
adjacent regions, merges regions whose spaces touch, and bisects until a
stopping rule fires.
"""

from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    EmptyRegionError,
    InsufficientInputError,
    InvalidKError,
    ModelFormatError,
    ModelVersionError,
    NotFittedError,
    ParseError,
    ProbspaceError,
    SpecValidationError,
)
from .metric import (
    AxiomReport,
    FeatVec,
    ProbSpace,
    TriangleVertices,
    check_metric_axioms,
    dataset_fingerprint,
    point_space_distance,
    sample_spaces,
    scale_from_samples,
    space_space_distance,
    triangle_construction_violations,
    triangle_edge_lengths,
    triangle_vertices,
)
from .fit import FitTrace, SdlConfig, fit_max_prob_space, has_converged
from .engine import (
    Assignment,
    ClusterModel,
    EngineConfig,
    MergeEvent,
    Region,
    assign,
    assign_many,
    boundary_exchange,
    cluster,
    initial_partition,
    merge_overlapping,
    split_all,
)
from .data import (
    Dataset,
    MixtureComponent,
    MixtureSpec,
    generate_mixture,
    make_dataset,
    read_csv,
    read_model,
    write_csv,
    write_model,
)
from .evaluate import (
    EvalReport,
    SweepRow,
    adjusted_rand_index,
    dimension_sweep,
    format_sweep_summary,
    kmeans_baseline,
    purity,
    write_sweep_csv,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "AxiomReport",
    "ClusterModel",
    "Dataset",
    "DimensionMismatchError",
    "EmptyInputError",
    "EmptyRegionError",
    "EngineConfig",
    "EvalReport",
    "FeatVec",
    "FitTrace",
    "InsufficientInputError",
    "InvalidKError",
    "MergeEvent",
    "MixtureComponent",
    "MixtureSpec",
    "ModelFormatError",
    "ModelVersionError",
    "NotFittedError",
    "ParseError",
    "ProbSpace",
    "ProbspaceError",
    "Region",
    "SdlConfig",
    "SpecValidationError",
    "SweepRow",
    "TriangleVertices",
    "adjusted_rand_index",
    "assign",
    "assign_many",
    "boundary_exchange",
    "check_metric_axioms",
    "cluster",
    "dataset_fingerprint",
    "dimension_sweep",
    "fit_max_prob_space",
    "format_sweep_summary",
    "generate_mixture",
    "has_converged",
    "initial_partition",
    "kmeans_baseline",
    "make_dataset",
    "merge_overlapping",
    "point_space_distance",
    "purity",
    "read_csv",
    "read_model",
    "sample_spaces",
    "scale_from_samples",
    "space_space_distance",
    "split_all",
    "triangle_construction_violations",
    "triangle_edge_lengths",
    "triangle_vertices",
    "write_csv",
    "write_model",
    "write_sweep_csv",
]
