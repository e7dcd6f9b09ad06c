"""Regression experiments: baselines, linear and lasso models, grouped
cross-validation and the MSE/MED/R^2 report.

Every regressor predicts each target dimension with the linear model
f_d = w0_d + sum_k w_k_d x_k.  The lasso objective per dimension is

    (1/N) sum_i (y_d_i - f_d_i)^2 + (beta/K) sum_k |w_k_d|

with an unpenalized intercept, minimized by cyclic coordinate descent
with soft thresholding; beta = 0 recovers ordinary least squares.

Evaluation metrics: MSE sums per-dimension mean squared errors, MED is
the mean Euclidean distance between prediction and target, and R^2
averages the per-dimension coefficient of determination.  Grouped
cross-validation keeps all rows of one original stimulus in the same
fold, aggregates exactly one held-out prediction per row for the test
metrics, and averages the in-fold training evaluations.  Overfitting
ratios are oriented so values above one mean overfitting: test/train
for the error metrics, train/test for R^2 (with equal train and test
values mapping to exactly 1, which covers the zero baseline's 0/0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rng import derive_rng
from .data import FeatureMatrix, TargetAssignment
from .errors import (
    EmptyTrainingSet,
    IndivisibleGroups,
    ShapeMismatch,
    ValidationError,
)

REGRESSOR_KINDS = ("zero_baseline", "linear", "lasso")

BETA_GRID_DEFAULT = (
    0.0, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0,
)

LASSO_SWEEP_TOLERANCE = 1e-7
LASSO_MAX_SWEEPS = 10_000


@dataclass(frozen=True)
class RegressorSpec:
    """Which regressor to run, and its lasso regularization strength."""

    kind: str
    beta: float = 0.0
    beta_grid: tuple[float, ...] = BETA_GRID_DEFAULT

    def __post_init__(self):
        if self.kind not in REGRESSOR_KINDS:
            raise ValidationError(
                f"kind must be one of {REGRESSOR_KINDS}, got {self.kind!r}"
            )
        if self.beta < 0:
            raise ValidationError("beta must be >= 0")


@dataclass(frozen=True)
class LinearModel:
    """Per-dimension intercepts plus a K-by-t weight matrix."""

    intercept: np.ndarray
    weights: np.ndarray

    def predict(self, features: np.ndarray) -> np.ndarray:
        return features @ self.weights + self.intercept


@dataclass(frozen=True)
class SplitMetrics:
    mse: float
    med: float
    r_squared: float


@dataclass(frozen=True)
class EvaluationReport:
    """Train/test metrics and overfitting ratios for one run."""

    train: SplitMetrics
    test: SplitMetrics
    overfit_mse: float
    overfit_med: float
    overfit_r2: float
    regressor: str
    feature_space: str = ""
    target_space: str = ""
    shuffled: bool = False
    beta: float | None = None


def fit_linear(features, targets) -> LinearModel:
    """Least-squares linear model, minimum-norm on rank-deficient data."""
    x = np.asarray(features, dtype=float)
    y = np.atleast_2d(np.asarray(targets, dtype=float))
    if x.ndim != 2 or x.shape[0] == 0:
        raise EmptyTrainingSet("no training rows")
    if y.shape[0] != x.shape[0]:
        raise ShapeMismatch(f"{x.shape[0]} rows but {y.shape[0]} targets")
    design = np.hstack([np.ones((x.shape[0], 1)), x])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return LinearModel(intercept=coef[0], weights=coef[1:])


def fit_lasso(features, targets, beta: float) -> LinearModel:
    """L1-regularized linear model via cyclic coordinate descent.

    Works on centered features and targets so the intercept stays
    unpenalized; a sweep updates every coordinate once with the
    soft-threshold rule, and iteration stops when the largest weight
    change in a sweep drops below 1e-7 (or after 10,000 sweeps).
    """
    if beta < 0:
        raise ValidationError("beta must be >= 0")
    x = np.asarray(features, dtype=float)
    y = np.atleast_2d(np.asarray(targets, dtype=float))
    if x.ndim != 2 or x.shape[0] == 0:
        raise EmptyTrainingSet("no training rows")
    if y.shape[0] != x.shape[0]:
        raise ShapeMismatch(f"{x.shape[0]} rows but {y.shape[0]} targets")
    n, k = x.shape
    t = y.shape[1]
    x_mean = x.mean(axis=0)
    y_mean = y.mean(axis=0)
    xc = x - x_mean
    yc = y - y_mean
    col_sq = np.einsum("ij,ij->j", xc, xc)
    threshold = n * beta / (2.0 * k)

    weights = np.zeros((k, t))
    for d in range(t):
        w = weights[:, d]
        residual = yc[:, d].copy()
        for _ in range(LASSO_MAX_SWEEPS):
            max_change = 0.0
            for j in range(k):
                if col_sq[j] == 0.0:
                    continue
                old = w[j]
                rho = xc[:, j] @ residual + old * col_sq[j]
                new = math.copysign(max(abs(rho) - threshold, 0.0), rho) / col_sq[j]
                if new != old:
                    residual -= (new - old) * xc[:, j]
                    w[j] = new
                    max_change = max(max_change, abs(new - old))
            if max_change < LASSO_SWEEP_TOLERANCE:
                break
    return LinearModel(intercept=y_mean - x_mean @ weights, weights=weights)


def zero_baseline_predict(n_rows: int, dims: int) -> np.ndarray:
    """The origin, for every row."""
    return np.zeros((n_rows, dims))


def evaluate(predictions, targets, target_mean=None) -> SplitMetrics:
    """MSE, MED and R^2 of predictions against targets.

    ``target_mean`` overrides the per-dimension mean used in the R^2
    denominator; by default the evaluated set's own mean is used.
    """
    pred = np.atleast_2d(np.asarray(predictions, dtype=float))
    targ = np.atleast_2d(np.asarray(targets, dtype=float))
    if pred.shape != targ.shape:
        raise ShapeMismatch(f"predictions {pred.shape} vs targets {targ.shape}")
    if pred.shape[0] < 2:
        raise ValidationError("need at least two rows to evaluate")
    err = targ - pred
    mse = float(np.mean(np.sum(err**2, axis=1)))
    med = float(np.mean(np.sqrt(np.sum(err**2, axis=1))))
    mean = targ.mean(axis=0) if target_mean is None else np.asarray(target_mean)
    s_res = np.sum(err**2, axis=0)
    s_tot = np.sum((targ - mean) ** 2, axis=0)
    if (s_tot == 0).any():
        raise ValidationError("a target dimension has zero variance")
    r_squared = float(np.mean(1.0 - s_res / s_tot))
    return SplitMetrics(mse=mse, med=med, r_squared=r_squared)


def _ratio(numerator: float, denominator: float) -> float:
    # Equal performance on both splits is exactly "no overfitting";
    # this also settles the zero baseline's 0/0 on R^2.
    if abs(numerator - denominator) <= 1e-12:
        return 1.0
    if denominator == 0.0:
        return math.copysign(math.inf, numerator)
    return numerator / denominator


def _fold_groups(groups: tuple[str, ...], folds: int, seed: int) -> list[set[str]]:
    ordered = sorted(groups)
    perm = derive_rng(seed, "group-folds").permutation(len(ordered))
    shuffled = [ordered[i] for i in perm]
    size = len(ordered) // folds
    return [set(shuffled[i * size : (i + 1) * size]) for i in range(folds)]


def _fit_and_predict(spec, train_x, train_y, test_x, dims):
    if spec.kind == "zero_baseline":
        return (
            zero_baseline_predict(train_x.shape[0], dims),
            zero_baseline_predict(test_x.shape[0], dims),
        )
    if spec.kind == "linear":
        model = fit_linear(train_x, train_y)
    else:
        model = fit_lasso(train_x, train_y, spec.beta)
    return model.predict(train_x), model.predict(test_x)


def grouped_cross_validation(
    features: FeatureMatrix,
    assignment: TargetAssignment,
    spec: RegressorSpec,
    folds: int = 8,
    seed: int = 0,
    feature_space: str = "",
    target_space: str = "",
) -> EvaluationReport:
    """Grouped k-fold evaluation of one regressor.

    Groups (original stimuli) are dealt into ``folds`` equal folds by a
    seeded shuffle of the lexicographically sorted group ids, so all
    augmented rows of one stimulus stay together.  Test metrics come
    from the aggregate of held-out predictions (exactly one per row);
    training metrics are the across-fold mean of in-fold evaluations,
    with the full target set's per-dimension mean in the R^2
    denominator so both splits are measured against the same center.
    """
    groups = features.groups
    if len(groups) % folds != 0:
        raise IndivisibleGroups(
            f"{len(groups)} groups do not divide into {folds} folds"
        )
    counts = {g: 0 for g in groups}
    for g in features.group_ids:
        counts[g] += 1
    if len(set(counts.values())) != 1:
        raise IndivisibleGroups("groups have unequal replicate counts")

    targets = assignment.targets_for(features.group_ids)
    dims = targets.shape[1]
    global_mean = targets.mean(axis=0)
    group_index = np.asarray(features.group_ids)

    aggregated = np.empty_like(targets)
    train_metrics: list[SplitMetrics] = []
    for fold in _fold_groups(groups, folds, seed):
        test_mask = np.isin(group_index, sorted(fold))
        train_mask = ~test_mask
        train_pred, test_pred = _fit_and_predict(
            spec,
            features.values[train_mask],
            targets[train_mask],
            features.values[test_mask],
            dims,
        )
        aggregated[test_mask] = test_pred
        train_metrics.append(
            evaluate(train_pred, targets[train_mask], target_mean=global_mean)
        )

    train = SplitMetrics(
        mse=float(np.mean([m.mse for m in train_metrics])),
        med=float(np.mean([m.med for m in train_metrics])),
        r_squared=float(np.mean([m.r_squared for m in train_metrics])),
    )
    test = evaluate(aggregated, targets)
    return EvaluationReport(
        train=train,
        test=test,
        overfit_mse=_ratio(test.mse, train.mse),
        overfit_med=_ratio(test.med, train.med),
        overfit_r2=_ratio(train.r_squared, test.r_squared),
        regressor=spec.kind,
        feature_space=feature_space,
        target_space=target_space,
        shuffled=assignment.shuffled,
        beta=spec.beta if spec.kind == "lasso" else None,
    )


def shuffle_targets(assignment: TargetAssignment, seed: int | None) -> TargetAssignment:
    """Permute the group-to-point mapping with a seeded shuffle.

    ``seed=None`` is the documented identity sentinel: the mapping is
    unchanged but the result is still flagged as shuffled.
    """
    if seed is None:
        perm = np.arange(len(assignment.group_labels))
    else:
        perm = derive_rng(seed, "target-shuffle").permutation(
            len(assignment.group_labels)
        )
    return TargetAssignment(
        group_labels=assignment.group_labels,
        points=assignment.points[perm],
        shuffled=True,
    )


def beta_sweep(
    features: FeatureMatrix,
    assignment: TargetAssignment,
    beta_grid=BETA_GRID_DEFAULT,
    folds: int = 8,
    seed: int = 0,
    feature_space: str = "",
    target_space: str = "",
) -> list[EvaluationReport]:
    """One grouped cross-validation per lasso regularization value."""
    grid = tuple(beta_grid)
    if not grid:
        raise ValidationError("beta grid must be nonempty")
    return [
        grouped_cross_validation(
            features,
            assignment,
            RegressorSpec(kind="lasso", beta=beta),
            folds=folds,
            seed=seed,
            feature_space=feature_space,
            target_space=target_space,
        )
        for beta in grid
    ]


def best_beta_indices(reports, tolerance: float = 1e-6) -> list[int]:
    """Indices of sweep entries within ``tolerance`` of the best test MSE."""
    best = min(report.test.mse for report in reports)
    return [
        i for i, report in enumerate(reports) if report.test.mse <= best + tolerance
    ]
