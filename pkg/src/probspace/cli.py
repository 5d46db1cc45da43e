"""Command-line interface: cluster, assign, check-metric, gen, report.

Exit codes: 0 on success, 1 on domain errors (bad data, dimension
mismatches, failed checks), 2 on usage errors (bad flags or malformed
specs).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .data import (
    MixtureComponent,
    MixtureSpec,
    generate_mixture,
    read_csv,
    read_model,
    write_csv,
    write_model,
)
from .engine import EngineConfig, assign_many, cluster
from .errors import DimensionMismatchError, ProbspaceError, SpecValidationError
from .fit import SdlConfig
from .metric import (
    check_metric_axioms,
    sample_spaces,
    triangle_construction_violations,
)


class _UsageError(Exception):
    """Flag-level validation failure; maps to exit code 2."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise _UsageError(message)


def cmd_cluster(args: argparse.Namespace) -> int:
    _require(args.target_k is None or args.target_k >= 1, "--target-k must be >= 1")
    _require(args.max_levels >= 1, "--max-levels must be >= 1")
    _require(args.delta > 0, "--delta must be positive")
    _require(args.max_migrations >= 1, "--max-migrations must be >= 1")
    _require(args.max_convergences >= 1, "--max-convergences must be >= 1")
    _require(args.mu >= 1, "--mu must be >= 1")

    dataset = read_csv(args.input, labels=args.labels)
    cfg = EngineConfig(
        target_k=args.target_k,
        max_levels=args.max_levels,
        merge_enabled=not args.no_merge,
        sdl=SdlConfig(
            delta=args.delta,
            max_migrations=args.max_migrations,
            max_convergences=args.max_convergences,
            mu=args.mu,
            seed=args.seed,
        ),
    )
    start = time.perf_counter()
    model = cluster(dataset.vectors, cfg)
    elapsed = time.perf_counter() - start
    write_model(model, args.out)

    if args.report:
        report = {
            "cluster_count": len(model.regions),
            "sizes": [r.size() for r in model.regions],
            "regions": [
                {
                    "id": r.id,
                    "center": list(r.space.center.values),
                    "scale": list(r.space.scale),
                    "count": r.space.count,
                }
                for r in model.regions
            ],
            "merge_log": [[e.survivor, e.absorbed, e.distance] for e in model.merge_log],
            "wall_time_s": elapsed,
        }
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")

    print(
        f"clustered {len(dataset)} points (dim {dataset.dim}) into "
        f"{len(model.regions)} regions, {len(model.merge_log)} merges, "
        f"{elapsed:.2f}s -> {args.out}"
    )
    return 0


def cmd_assign(args: argparse.Namespace) -> int:
    model = read_model(args.model)
    dataset = read_csv(args.input, labels=args.labels)
    if dataset.dim != model.dim:
        raise DimensionMismatchError(
            f"input dimension {dataset.dim} != model dimension {model.dim}"
        )
    ids, dists = assign_many(dataset.matrix(), model)
    lines = []
    for rid, dist in zip(ids, dists):
        inside = "true" if dist == 0.0 else "false"
        lines.append(f"{int(rid)},{float(dist)!r},{inside}")
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"assigned {len(lines)} vectors across {len(model.regions)} regions -> {args.out}")
    return 0


def cmd_check_metric(args: argparse.Namespace) -> int:
    _require(args.trials >= 1, "--trials must be >= 1")
    _require(
        args.model is not None or args.random is not None,
        "provide --model PATH or --random N",
    )
    if args.random is not None:
        _require(args.random >= 3, "--random must be >= 3")
        _require(args.dim is not None and args.dim >= 1, "--random requires --dim >= 1")
        spaces = sample_spaces(args.random, args.dim, args.seed)
    else:
        model = read_model(args.model)
        spaces = [r.space for r in model.regions]
        if len(spaces) < 3:
            print(f"error: model has {len(spaces)} regions, need >= 3", file=sys.stderr)
            return 1

    report = check_metric_axioms(spaces, trials=args.trials, seed=args.seed)
    construction = triangle_construction_violations(trials=args.trials, seed=args.seed)
    print(f"trials: {report.trials}")
    print(f"non-negativity violations: {report.nonnegativity_violations}")
    print(f"symmetry violations: {report.symmetry_violations}")
    print(f"self-distance violations: {report.self_distance_violations}")
    print(f"triangle-inequality violations: {report.triangle_violations}")
    print(f"triangle-construction violations: {construction}")
    return 0 if report.ok and construction == 0 else 1


def _parse_components(text: str) -> tuple[MixtureComponent, ...]:
    """Parse 'weight:c1,c2:s1,s2;weight:...' into mixture components."""
    components = []
    for part in text.split(";"):
        fields = part.split(":")
        if len(fields) != 3:
            raise _UsageError(
                f"component {part!r} must be weight:center:sigma (colon-separated)"
            )
        try:
            weight = float(fields[0])
            center = tuple(float(c) for c in fields[1].split(","))
            sigma = tuple(float(s) for s in fields[2].split(","))
            components.append(MixtureComponent(weight=weight, center=center, sigma=sigma))
        except (ValueError, SpecValidationError) as exc:
            raise _UsageError(f"bad component {part!r}: {exc}") from exc
    return tuple(components)


def cmd_gen(args: argparse.Namespace) -> int:
    _require(
        (args.components is None) != (args.spec is None),
        "provide exactly one of --components or --spec",
    )
    n = args.n
    seed = args.seed
    if args.components is not None:
        components = _parse_components(args.components)
    else:
        try:
            doc = json.loads(Path(args.spec).read_text(encoding="utf-8"))
            components = tuple(
                MixtureComponent(
                    weight=float(c["weight"]),
                    center=tuple(float(x) for x in c["center"]),
                    sigma=tuple(float(x) for x in c["sigma"]),
                )
                for c in doc["components"]
            )
            n = n if n is not None else doc.get("n")
            seed = seed if seed is not None else doc.get("seed")
        except (KeyError, TypeError, ValueError, SpecValidationError) as exc:
            raise _UsageError(f"bad spec file {args.spec}: {exc}") from exc
    _require(n is not None and n >= 1, "--n must be >= 1")
    _require(seed is not None, "--seed is required (flag or spec file)")
    try:
        spec = MixtureSpec(components=components, n=int(n), seed=int(seed))
    except SpecValidationError as exc:
        raise _UsageError(str(exc)) from exc
    dataset = generate_mixture(spec)
    write_csv(dataset, args.out)
    print(f"generated {len(dataset)} samples (dim {dataset.dim}) -> {args.out}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    parts = args.proj.split(",")
    _require(len(parts) == 2, "--proj must be two comma-separated indices, e.g. 0,1")
    try:
        j1, j2 = int(parts[0]), int(parts[1])
    except ValueError:
        raise _UsageError(f"--proj indices must be integers, got {args.proj!r}") from None
    _require(j1 >= 0 and j2 >= 0, "--proj indices must be non-negative")

    model = read_model(args.model)
    dataset = read_csv(args.input, labels=args.labels)
    from .plot import render_projection

    render_projection(model, dataset.matrix(), (j1, j2), args.out)
    print(f"rendered {len(model.regions)} regions over {len(dataset)} points -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probspace",
        description="Probability-space clustering toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cluster = sub.add_parser("cluster", help="cluster a CSV dataset and write a model")
    p_cluster.add_argument("--input", required=True, help="input CSV path")
    p_cluster.add_argument("--out", required=True, help="output model path")
    p_cluster.add_argument("--target-k", type=int, default=None, dest="target_k")
    p_cluster.add_argument("--max-levels", type=int, default=6, dest="max_levels")
    p_cluster.add_argument("--delta", type=float, default=1e-8)
    p_cluster.add_argument("--max-migrations", type=int, default=3, dest="max_migrations")
    p_cluster.add_argument("--max-convergences", type=int, default=1, dest="max_convergences")
    p_cluster.add_argument("--mu", type=int, default=50)
    p_cluster.add_argument("--no-merge", action="store_true", dest="no_merge")
    p_cluster.add_argument("--seed", type=int, default=0)
    p_cluster.add_argument("--report", default=None, help="optional JSON report path")
    p_cluster.add_argument(
        "--labels", action="store_true",
        help="input has a trailing integer label column; strip it before clustering",
    )
    p_cluster.set_defaults(func=cmd_cluster)

    p_assign = sub.add_parser("assign", help="assign vectors to a fitted model's regions")
    p_assign.add_argument("--model", required=True)
    p_assign.add_argument("--input", required=True)
    p_assign.add_argument("--out", required=True)
    p_assign.add_argument("--labels", action="store_true",
                          help="input has a trailing integer label column; strip it")
    p_assign.set_defaults(func=cmd_assign)

    p_check = sub.add_parser("check-metric", help="sample metric axioms and report violations")
    p_check.add_argument("--model", default=None)
    p_check.add_argument("--random", type=int, default=None, metavar="N",
                         help="check N randomly sampled spaces instead of a model")
    p_check.add_argument("--dim", type=int, default=None)
    p_check.add_argument("--trials", type=int, default=1000)
    p_check.add_argument("--seed", type=int, default=0)
    p_check.set_defaults(func=cmd_check_metric)

    p_gen = sub.add_parser("gen", help="generate a labeled Gaussian-mixture CSV")
    p_gen.add_argument("--components", default=None,
                       help="inline spec: weight:c1,c2:s1,s2;weight:... ")
    p_gen.add_argument("--spec", default=None, help="JSON spec file")
    p_gen.add_argument("--n", type=int, default=None)
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen)

    p_report = sub.add_parser("report", help="render a 2-D projection of a model over data")
    p_report.add_argument("--model", required=True)
    p_report.add_argument("--input", required=True)
    p_report.add_argument("--proj", default="0,1", help="two dimension indices, e.g. 0,17")
    p_report.add_argument("--out", required=True)
    p_report.add_argument("--labels", action="store_true",
                          help="input has a trailing integer label column; strip it")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ProbspaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
