"""Distances between stimulus representations and their correlation
with dissimilarity ratings.

Three distance functions are supported, each in an unweighted and a
per-dimension nonnegatively weighted form:

    euclidean      sqrt(sum_k w_k (u_k - v_k)^2)
    manhattan      sum_k w_k |u_k - v_k|
    inner_product  -sum_k w_k u_k v_k

The negated inner product is not a metric: it can be negative and its
diagonal is nonzero.  To fit the dissimilarity-matrix contract, its
off-diagonal values are shifted up by the magnitude of their global
minimum (recorded in the matrix metadata) and the diagonal is set to
zero.  The shift is a constant over pairs, so the rank order and the
correlation analysis are unaffected.

Dimension weights are learned by nonnegative least squares on the
per-pair, per-dimension contribution vectors, with held-out distance
predictions collected over a seeded cross-validation over pairs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from ._rng import derive_rng
from .data import Configuration, DissimilarityMatrix, FeatureMatrix
from .errors import (
    ConstantInput,
    DegenerateWeights,
    DimensionMismatch,
    FoldTooSmall,
    LabelMismatch,
    ValidationError,
)
from .nnls import nnls

METRICS = ("euclidean", "manhattan", "inner_product")


@dataclass(frozen=True)
class DistanceSpec:
    """Distance function plus optional nonnegative dimension weights."""

    metric: str
    weights: np.ndarray | None = None

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValidationError(
                f"metric must be one of {METRICS}, got {self.metric!r}"
            )
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            object.__setattr__(self, "weights", w)
            if w.ndim != 1:
                raise DimensionMismatch("weights must be a vector")
            if (w < 0).any() or not w.any():
                raise ValidationError("weights must be >= 0 and not all zero")


@dataclass(frozen=True)
class CorrelationReport:
    """Correlation of one distance variant against the ratings."""

    pearson_r: float
    spearman_rho: float
    n_pairs: int
    metric: str
    weighted: bool


def _rows_and_labels(representation) -> tuple[np.ndarray, tuple[str, ...]]:
    if isinstance(representation, Configuration):
        return representation.coords, representation.labels
    if isinstance(representation, FeatureMatrix):
        return representation.values, representation.sample_ids
    raise ValidationError(
        "representation must be a Configuration or FeatureMatrix"
    )


def _aligned_rows(representation, labels: tuple[str, ...]) -> np.ndarray:
    values, own = _rows_and_labels(representation)
    if set(own) != set(labels):
        raise LabelMismatch("representation rows do not match stimulus labels")
    index = {label: i for i, label in enumerate(own)}
    return values[[index[label] for label in labels]]


def _weight_vector(spec: DistanceSpec, k: int) -> np.ndarray:
    if spec.weights is None:
        return np.ones(k)
    if spec.weights.shape[0] != k:
        raise DimensionMismatch(
            f"{spec.weights.shape[0]} weights for {k}-dimensional rows"
        )
    return spec.weights


def _condensed(x: np.ndarray, spec: DistanceSpec) -> tuple[np.ndarray, float]:
    """Upper-triangle distances and the inner-product shift (0 otherwise)."""
    w = _weight_vector(spec, x.shape[1])
    iu, jv = np.triu_indices(x.shape[0], k=1)
    u, v = x[iu], x[jv]
    if spec.metric == "euclidean":
        return np.sqrt((u - v) ** 2 @ w), 0.0
    if spec.metric == "manhattan":
        return np.abs(u - v) @ w, 0.0
    raw = -((u * v) @ w)
    shift = float(np.abs(raw.min())) if raw.size else 0.0
    return raw + shift, shift


def pairwise_distances(representation, spec: DistanceSpec) -> DissimilarityMatrix:
    """Distance matrix between the rows of a representation.

    Rows must describe one stimulus each.  The result is a valid
    dissimilarity matrix (symmetric, zero diagonal, nonnegative); for
    the inner-product metric the applied shift is recorded under the
    ``inner_product_shift`` metadata key.
    """
    x, labels = _rows_and_labels(representation)
    vec, shift = _condensed(x, spec)
    n = x.shape[0]
    full = np.zeros((n, n))
    full[np.triu_indices(n, k=1)] = vec
    full = full + full.T
    meta = {"inner_product_shift": shift} if spec.metric == "inner_product" else {}
    return DissimilarityMatrix(values=full, labels=labels, meta=meta)


def pearson(x, y) -> float:
    """Pearson correlation coefficient of two equal-length vectors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch("vectors must share one length")
    if x.size < 2:
        raise ValidationError("need at least two samples")
    dx = x - x.mean()
    dy = y - y.mean()
    denom = np.sqrt(np.sum(dx**2)) * np.sqrt(np.sum(dy**2))
    if denom == 0.0:
        raise ConstantInput("correlation undefined for constant input")
    return float(np.clip(np.sum(dx * dy) / denom, -1.0, 1.0))


def spearman(x, y) -> float:
    """Spearman rank correlation: Pearson on fractional (mid) ranks."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch("vectors must share one length")
    return pearson(rankdata(x, method="average"), rankdata(y, method="average"))


def _pair_design(
    x: np.ndarray, delta_vec: np.ndarray, metric: str
) -> tuple[np.ndarray, np.ndarray]:
    """Per-pair, per-dimension contributions and the regression response."""
    iu, jv = np.triu_indices(x.shape[0], k=1)
    u, v = x[iu], x[jv]
    if metric == "euclidean":
        return (u - v) ** 2, delta_vec**2
    if metric == "manhattan":
        return np.abs(u - v), delta_vec
    return u * v, -delta_vec


def _predicted_distances(contributions, weights, metric) -> np.ndarray:
    fitted = contributions @ weights
    if metric == "euclidean":
        return np.sqrt(np.maximum(fitted, 0.0))
    if metric == "manhattan":
        return fitted
    return -fitted


def fit_distance_weights(
    representation,
    metric: str,
    delta: DissimilarityMatrix,
    folds: int = 5,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Learn nonnegative dimension weights for one distance function.

    Builds one regression sample per stimulus pair (contribution vector
    against the rating, squared on both sides for the euclidean case so
    the model stays linear in the weights) and solves nonnegative least
    squares per training fold of a seeded ``folds``-fold partition of
    the pairs.  Held-out predicted distances are collected across folds;
    the returned weights are refit on all pairs.

    Returns
    -------
    weights : numpy.ndarray, shape (k,)
    cv_predictions : numpy.ndarray, shape (n_pairs,)

    Warns
    -----
    DegenerateWeights
        If the all-pairs fit lands on the boundary with every weight
        zero.
    """
    if metric not in METRICS:
        raise ValidationError(f"metric must be one of {METRICS}, got {metric!r}")
    if folds < 2:
        raise ValidationError("folds must be >= 2")
    x = _aligned_rows(representation, delta.labels)
    contributions, response = _pair_design(x, delta.pair_values(), metric)
    n_pairs = contributions.shape[0]
    if n_pairs < folds:
        raise FoldTooSmall(f"{n_pairs} pairs cannot fill {folds} folds")

    order = derive_rng(seed, "pair-folds").permutation(n_pairs)
    cv_predictions = np.empty(n_pairs)
    for part in np.array_split(order, folds):
        train = np.setdiff1d(order, part, assume_unique=True)
        fold_weights, _ = nnls(contributions[train], response[train])
        cv_predictions[part] = _predicted_distances(
            contributions[part], fold_weights, metric
        )

    weights, _ = nnls(contributions, response)
    if not weights.any():
        warnings.warn(
            "nonnegative least squares found no usable dimensions",
            DegenerateWeights,
        )
    return weights, cv_predictions


def correlation_analysis(
    representation,
    delta: DissimilarityMatrix,
    metric: str,
    weighting: str = "none",
    folds: int = 5,
    seed: int = 0,
) -> CorrelationReport:
    """Correlate one distance variant against the dissimilarity ratings.

    With ``weighting="none"`` the distances come straight from the
    representation; with ``weighting="nnls"`` the held-out predictions
    of :func:`fit_distance_weights` are used, so the reported
    correlations are cross-validated.
    """
    if weighting not in ("none", "nnls"):
        raise ValidationError(f"weighting must be none or nnls, got {weighting!r}")
    delta_vec = delta.pair_values()
    if weighting == "none":
        x = _aligned_rows(representation, delta.labels)
        distances, _ = _condensed(x, DistanceSpec(metric=metric))
    else:
        _, distances = fit_distance_weights(
            representation, metric, delta, folds=folds, seed=seed
        )
    return CorrelationReport(
        pearson_r=pearson(distances, delta_vec),
        spearman_rho=spearman(distances, delta_vec),
        n_pairs=int(delta_vec.size),
        metric=metric,
        weighted=weighting == "nnls",
    )
