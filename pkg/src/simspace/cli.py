"""Command-line interface: one subcommand per pipeline stage.

Exit codes: 0 on success, 1 on a validation or usage error, 2 on a
runtime error.  Every stochastic subcommand takes an explicit --seed;
there are no wall-clock defaults, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .augment import STEPS, AugmentationPlan, augment_dataset
from .data import (
    load_configuration_csv,
    load_dissimilarity_csv,
    load_feature_csv,
    normalize_configuration,
    save_configuration_csv,
    save_feature_csv,
    TargetAssignment,
)
from .distances import METRICS, correlation_analysis
from .errors import SimspaceError, ValidationError
from .experiment import load_experiment_config, run_experiment
from .mds import MdsOptions, SweepEntry, dimension_sweep, evaluate_stress, fit_mds
from .pixels import AGGREGATORS, pixel_features
from .regression import (
    BETA_GRID_DEFAULT,
    RegressorSpec,
    best_beta_indices,
    beta_sweep,
    grouped_cross_validation,
    shuffle_targets,
)
from .reports import (
    write_correlation_csv,
    write_regression_report_csv,
    write_scree_csv,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are validation errors: exit 1
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _cmd_mds(args) -> int:
    delta = load_dissimilarity_csv(args.dissimilarities)
    options = MdsOptions(
        mode=args.mode,
        dims=args.dims if args.dims else 1,
        seed=args.seed,
        restarts=args.restarts,
        max_iterations=args.max_iter,
        convergence_epsilon=args.epsilon,
    )
    if args.sweep:
        if not args.scree:
            raise ValidationError("--sweep requires --scree")
        lo, hi = args.sweep
        entries = dimension_sweep(delta, (lo, hi), options)
        out = Path(args.out)
        for entry in entries:
            save_configuration_csv(
                entry.result.configuration,
                out.with_name(f"{out.stem}_t{entry.dims}{out.suffix}"),
            )
        write_scree_csv(entries, args.scree)
        return 0
    if not args.dims:
        raise ValidationError("either --dims or --sweep is required")
    result = fit_mds(delta, options)
    save_configuration_csv(result.configuration, args.out)
    print(f"stress {result.stress!r} (best restart {result.best_restart})")
    if args.scree:
        entry = SweepEntry(
            dims=args.dims,
            result=result,
            metric_stress=evaluate_stress(result.configuration, delta, "metric"),
            nonmetric_stress=evaluate_stress(result.configuration, delta, "nonmetric"),
        )
        write_scree_csv([entry], args.scree)
    return 0


def _cmd_stress(args) -> int:
    delta = load_dissimilarity_csv(args.dissimilarities)
    config = load_configuration_csv(args.configuration)
    modes = ("metric", "nonmetric") if args.mode == "both" else (args.mode,)
    for mode in modes:
        print(f"{mode}_stress {evaluate_stress(config, delta, mode)!r}")
    return 0


def _cmd_correlate(args) -> int:
    delta = load_dissimilarity_csv(args.dissimilarities)
    if args.features:
        representation = load_feature_csv(args.features)
    else:
        representation = load_configuration_csv(args.configuration)
    metrics = args.metrics.split(",")
    weightings = args.weighting.split(",")
    reports = [
        correlation_analysis(
            representation, delta, metric, weighting,
            folds=args.folds, seed=args.seed,
        )
        for metric in metrics
        for weighting in weightings
    ]
    write_correlation_csv(reports, args.out)
    best = max(reports, key=lambda r: r.pearson_r)
    flavor = "nnls-weighted" if best.weighted else "unweighted"
    print(f"best: {best.metric} {flavor} (pearson {best.pearson_r!r})")
    return 0


def _cmd_pixel_baseline(args) -> int:
    blocks = [int(b) for b in args.block.split(",")]
    group_of = None
    if args.manifest:
        from .augment import load_manifest_csv

        group_of = load_manifest_csv(args.manifest).group_of()
    out = Path(args.out)
    for block in blocks:
        features = pixel_features(args.images, block, args.aggregator, group_of)
        target = (
            out
            if len(blocks) == 1
            else out.with_name(f"{out.stem}_k{block}{out.suffix}")
        )
        save_feature_csv(features, target)
        print(f"block {block}: {features.rows} rows x {features.k} features -> {target}")
    return 0


def _cmd_augment(args) -> int:
    plan = AugmentationPlan(
        seed=args.seed,
        per_image=args.count,
        steps=tuple(args.steps.split(",")) if args.steps else STEPS,
    )
    manifest = augment_dataset(args.images, plan, args.out)
    print(f"wrote {len(manifest.rows)} augmented images to {args.out}")
    return 0


def _cmd_regress(args) -> int:
    features = load_feature_csv(args.features)
    space = normalize_configuration(load_configuration_csv(args.targets))
    assignment = TargetAssignment.from_configuration(space)
    if args.shuffle_targets is not None:
        seed = None if args.shuffle_targets == "identity" else int(args.shuffle_targets)
        assignment = shuffle_targets(assignment, seed)
    feature_space = Path(args.features).stem
    target_space = Path(args.targets).stem

    if args.regressor == "lasso" and args.beta is None:
        grid = (
            tuple(float(b) for b in args.beta_grid.split(","))
            if args.beta_grid
            else BETA_GRID_DEFAULT
        )
        reports = beta_sweep(
            features, assignment, beta_grid=grid,
            folds=args.folds, seed=args.seed,
            feature_space=feature_space, target_space=target_space,
        )
        for i in best_beta_indices(reports):
            print(f"best beta {reports[i].beta!r} (test MSE {reports[i].test.mse!r})")
    else:
        kind = {"baseline": "zero_baseline"}.get(args.regressor, args.regressor)
        spec = RegressorSpec(kind=kind, beta=args.beta or 0.0)
        reports = [
            grouped_cross_validation(
                features, assignment, spec,
                folds=args.folds, seed=args.seed,
                feature_space=feature_space, target_space=target_space,
            )
        ]
    write_regression_report_csv(reports, args.out)
    return 0


def _cmd_experiment(args) -> int:
    config = load_experiment_config(args.config)
    reports = run_experiment(config)
    print(f"{config.preset}: {len(reports)} evaluations -> {config.output_dir / 'report.csv'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="simspace", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mds", parents=[], help="fit a similarity space with SMACOF")
    p.add_argument("--dissimilarities", required=True)
    p.add_argument("--mode", required=True, choices=("metric", "nonmetric"))
    p.add_argument("--dims", type=int)
    p.add_argument("--sweep", nargs=2, type=int, metavar=("LO", "HI"))
    p.add_argument("--restarts", type=int, default=256)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--scree")
    p.set_defaults(func=_cmd_mds)

    p = sub.add_parser("stress", help="evaluate stress of a configuration")
    p.add_argument("--dissimilarities", required=True)
    p.add_argument("--configuration", required=True)
    p.add_argument("--mode", default="both", choices=("metric", "nonmetric", "both"))
    p.set_defaults(func=_cmd_stress)

    p = sub.add_parser("correlate", help="correlate distances with ratings")
    p.add_argument("--dissimilarities", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--features")
    src.add_argument("--configuration")
    p.add_argument("--metrics", default=",".join(METRICS))
    p.add_argument("--weighting", default="none,nnls")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_correlate)

    p = sub.add_parser("pixel-baseline", help="block-downscale images to features")
    p.add_argument("--images", required=True)
    p.add_argument("--block", required=True, help="block size, or comma list")
    p.add_argument("--aggregator", required=True, choices=tuple(AGGREGATORS))
    p.add_argument("--manifest", help="augmentation manifest mapping rows to originals")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_pixel_baseline)

    p = sub.add_parser("augment", help="expand images by seeded augmentation")
    p.add_argument("--images", required=True)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--steps", help=f"comma subset of {','.join(STEPS)}")
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("regress", help="grouped cross-validated regression")
    p.add_argument("--features", required=True)
    p.add_argument("--targets", required=True, help="target space configuration CSV")
    p.add_argument(
        "--regressor", required=True, choices=("baseline", "linear", "lasso")
    )
    p.add_argument("--beta", type=float)
    p.add_argument("--beta-grid", help="comma list; default is the standard grid")
    p.add_argument("--folds", type=int, default=8)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--shuffle-targets", metavar="SEED", help="int seed or 'identity'")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_regress)

    p = sub.add_parser("experiment", help="run a preset experiment from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"simspace: {exc}", file=sys.stderr)
        return 1
    except SimspaceError as exc:
        print(f"simspace: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # unexpected runtime failure
        print(f"simspace: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
