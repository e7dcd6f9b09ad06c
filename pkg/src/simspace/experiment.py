"""Experiment presets driven by a declarative key-value config file.

The file format is INI (``configparser`` without interpolation).  A
minimal config looks like::

    [experiment]
    preset = exp3
    seed = 42
    output_dir = out

    [data]
    dissimilarities = noun_dissimilarities.csv
    features_ann = ann_features.csv

    [mds]
    restarts = 64
    max_iterations = 1000
    dims_range = 1:10

    [regression]
    folds = 8
    shuffle_seed = 7
    beta_grid = 0.0,0.01,0.1,1.0

Presets:

* ``exp1`` fixes one externally supplied target space and crosses
  {linear, lasso grid} x {every supplied feature space} x
  {correct, shuffled targets}, plus the zero baseline.
* ``exp2`` compares target spaces of one dimensionality: the external
  space plus metric and nonmetric SMACOF solutions fit from the
  dissimilarity file, crossing {baseline, linear, lasso grid}.
* ``exp3`` sweeps nonmetric SMACOF target spaces over a dimensionality
  range with {baseline, linear, lasso grid}.

All seeds are explicit, every referenced input must exist when the run
starts, and all outputs are confined to ``output_dir`` (inputs are
never modified), so identical configs and inputs give byte-identical
outputs.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path

from .data import (
    FeatureMatrix,
    TargetAssignment,
    load_configuration_csv,
    load_dissimilarity_csv,
    load_feature_csv,
    normalize_configuration,
    save_configuration_csv,
)
from .errors import ValidationError
from .mds import MdsOptions, fit_mds
from .regression import (
    BETA_GRID_DEFAULT,
    EvaluationReport,
    RegressorSpec,
    beta_sweep,
    grouped_cross_validation,
    shuffle_targets,
)
from .reports import write_regression_report_csv

PRESETS = ("exp1", "exp2", "exp3")


@dataclass(frozen=True)
class ExperimentConfig:
    preset: str
    seed: int
    output_dir: Path
    dissimilarities: Path | None
    target_space: Path | None
    feature_files: dict[str, Path]
    mds_restarts: int
    mds_max_iterations: int
    mds_epsilon: float
    dims: int
    dims_range: tuple[int, int]
    folds: int
    shuffle_seed: int
    beta_grid: tuple[float, ...]


def _require(parser: configparser.ConfigParser, section: str, key: str) -> str:
    if not parser.has_option(section, key):
        raise ValidationError(f"config is missing [{section}] {key}")
    return parser.get(section, key)


def _existing_path(raw: str, base: Path, what: str) -> Path:
    path = Path(raw)
    if not path.is_absolute():
        path = base / path
    if not path.exists():
        raise ValidationError(f"{what} file {path} does not exist")
    return path


def load_experiment_config(path) -> ExperimentConfig:
    """Parse and validate an experiment config file."""
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"config file {path} does not exist")
    parser = configparser.ConfigParser(interpolation=None)
    parser.read(path, encoding="utf-8")
    base = path.parent

    preset = _require(parser, "experiment", "preset")
    if preset not in PRESETS:
        raise ValidationError(f"preset must be one of {PRESETS}, got {preset!r}")
    seed = int(_require(parser, "experiment", "seed"))
    output_dir = Path(_require(parser, "experiment", "output_dir"))
    if not output_dir.is_absolute():
        output_dir = base / output_dir

    feature_files: dict[str, Path] = {}
    if parser.has_section("data"):
        for key in parser.options("data"):
            if key.startswith("features"):
                name = key[len("features"):].lstrip("_") or "features"
                feature_files[name] = _existing_path(
                    parser.get("data", key), base, key
                )
    if not feature_files:
        raise ValidationError("config names no [data] features_* file")

    dissimilarities = None
    if parser.has_option("data", "dissimilarities"):
        dissimilarities = _existing_path(
            parser.get("data", "dissimilarities"), base, "dissimilarities"
        )
    target_space = None
    if parser.has_option("data", "target_space"):
        target_space = _existing_path(
            parser.get("data", "target_space"), base, "target_space"
        )

    if preset in ("exp1", "exp2") and target_space is None:
        raise ValidationError(f"{preset} needs [data] target_space")
    if preset in ("exp2", "exp3") and dissimilarities is None:
        raise ValidationError(f"{preset} needs [data] dissimilarities")

    dims_range = (1, 10)
    if parser.has_option("mds", "dims_range"):
        lo, _, hi = parser.get("mds", "dims_range").partition(":")
        dims_range = (int(lo), int(hi))

    beta_grid = BETA_GRID_DEFAULT
    if parser.has_option("regression", "beta_grid"):
        beta_grid = tuple(
            float(v) for v in parser.get("regression", "beta_grid").split(",")
        )

    return ExperimentConfig(
        preset=preset,
        seed=seed,
        output_dir=output_dir,
        dissimilarities=dissimilarities,
        target_space=target_space,
        feature_files=feature_files,
        mds_restarts=parser.getint("mds", "restarts", fallback=256),
        mds_max_iterations=parser.getint("mds", "max_iterations", fallback=1000),
        mds_epsilon=parser.getfloat("mds", "convergence_epsilon", fallback=1e-6),
        dims=parser.getint("mds", "dims", fallback=4),
        dims_range=dims_range,
        folds=parser.getint("regression", "folds", fallback=8),
        shuffle_seed=parser.getint("regression", "shuffle_seed", fallback=seed + 1),
        beta_grid=beta_grid,
    )


def _load_features(config: ExperimentConfig) -> dict[str, FeatureMatrix]:
    return {name: load_feature_csv(path) for name, path in config.feature_files.items()}


def _normalized_assignment(config_path) -> TargetAssignment:
    space = normalize_configuration(load_configuration_csv(config_path))
    return TargetAssignment.from_configuration(space)


def _fit_target_space(config: ExperimentConfig, mode: str, dims: int, out_name: str):
    delta = load_dissimilarity_csv(config.dissimilarities)
    options = MdsOptions(
        mode=mode,
        dims=dims,
        seed=config.seed,
        restarts=config.mds_restarts,
        max_iterations=config.mds_max_iterations,
        convergence_epsilon=config.mds_epsilon,
    )
    result = fit_mds(delta, options)
    space = normalize_configuration(result.configuration)
    save_configuration_csv(space, config.output_dir / out_name)
    return TargetAssignment.from_configuration(space)


def _evaluate_block(
    features: FeatureMatrix,
    assignment: TargetAssignment,
    config: ExperimentConfig,
    feature_space: str,
    target_space: str,
    include_baseline: bool,
    include_shuffled: bool,
) -> list[EvaluationReport]:
    reports = []
    variants = [assignment]
    if include_shuffled:
        variants.append(shuffle_targets(assignment, config.shuffle_seed))
    if include_baseline:
        reports.append(
            grouped_cross_validation(
                features,
                assignment,
                RegressorSpec(kind="zero_baseline"),
                folds=config.folds,
                seed=config.seed,
                feature_space="any",
                target_space=target_space,
            )
        )
    for variant in variants:
        reports.append(
            grouped_cross_validation(
                features,
                variant,
                RegressorSpec(kind="linear"),
                folds=config.folds,
                seed=config.seed,
                feature_space=feature_space,
                target_space=target_space,
            )
        )
        reports.extend(
            beta_sweep(
                features,
                variant,
                beta_grid=config.beta_grid,
                folds=config.folds,
                seed=config.seed,
                feature_space=feature_space,
                target_space=target_space,
            )
        )
    return reports


def run_experiment(config: ExperimentConfig) -> list[EvaluationReport]:
    """Run one preset and write ``report.csv`` into the output directory."""
    config.output_dir.mkdir(parents=True, exist_ok=True)
    features = _load_features(config)
    reports: list[EvaluationReport] = []

    if config.preset == "exp1":
        assignment = _normalized_assignment(config.target_space)
        target_name = Path(config.target_space).stem
        for i, (name, matrix) in enumerate(sorted(features.items())):
            reports.extend(
                _evaluate_block(
                    matrix,
                    assignment,
                    config,
                    feature_space=name,
                    target_space=target_name,
                    include_baseline=i == 0,
                    include_shuffled=True,
                )
            )
    elif config.preset == "exp2":
        name, matrix = sorted(features.items())[0]
        spaces = [
            (Path(config.target_space).stem, _normalized_assignment(config.target_space)),
            (
                "metric_smacof",
                _fit_target_space(config, "metric", config.dims, "space_metric.csv"),
            ),
            (
                "nonmetric_smacof",
                _fit_target_space(
                    config, "nonmetric", config.dims, "space_nonmetric.csv"
                ),
            ),
        ]
        for target_name, assignment in spaces:
            reports.extend(
                _evaluate_block(
                    matrix,
                    assignment,
                    config,
                    feature_space=name,
                    target_space=target_name,
                    include_baseline=True,
                    include_shuffled=False,
                )
            )
    else:  # exp3
        name, matrix = sorted(features.items())[0]
        lo, hi = config.dims_range
        for dims in range(lo, hi + 1):
            assignment = _fit_target_space(
                config, "nonmetric", dims, f"space_nonmetric_t{dims}.csv"
            )
            reports.extend(
                _evaluate_block(
                    matrix,
                    assignment,
                    config,
                    feature_space=name,
                    target_space=f"nonmetric_t{dims}",
                    include_baseline=True,
                    include_shuffled=False,
                )
            )

    write_regression_report_csv(reports, config.output_dir / "report.csv")
    return reports
