import numpy as np
import pytest

from simspace import Configuration, DissimilarityMatrix


def euclidean_delta(points: np.ndarray, labels=None) -> DissimilarityMatrix:
    """Exact Euclidean distance matrix of a point set."""
    diffs = points[:, None, :] - points[None, :, :]
    values = np.sqrt((diffs**2).sum(axis=-1))
    np.fill_diagonal(values, 0.0)
    values = (values + values.T) / 2
    if labels is None:
        labels = tuple(f"s{i}" for i in range(points.shape[0]))
    return DissimilarityMatrix(values=values, labels=labels)


def random_delta(rng: np.random.Generator, n: int) -> DissimilarityMatrix:
    """Random symmetric dissimilarity matrix with zero diagonal."""
    v = rng.uniform(0.1, 2.0, (n, n))
    v = (v + v.T) / 2
    np.fill_diagonal(v, 0.0)
    return DissimilarityMatrix(values=v, labels=tuple(f"s{i}" for i in range(n)))


def brute_force_monotone_sse(values, weights=None) -> float:
    """Exhaustive isotonic-regression oracle.

    Enumerates every contiguous block partition, assigns each block its
    weighted mean, keeps partitions whose means are nondecreasing, and
    returns the minimum weighted SSE.  Exponential: lengths <= ~16 only.
    """
    values = np.asarray(values, dtype=float)
    weights = (
        np.ones_like(values) if weights is None else np.asarray(weights, dtype=float)
    )
    m = values.size
    best = None
    for mask in range(1 << (m - 1)):
        bounds = [0] + [i + 1 for i in range(m - 1) if mask >> i & 1] + [m]
        sse = 0.0
        previous = -np.inf
        feasible = True
        for a, b in zip(bounds, bounds[1:]):
            w, v = weights[a:b], values[a:b]
            mean = float(w @ v / w.sum())
            if mean < previous:
                feasible = False
                break
            previous = mean
            sse += float(w @ (v - mean) ** 2)
        if feasible and (best is None or sse < best):
            best = sse
    return best


def pearson_oracle(x, y) -> float:
    """Direct evaluation of the displayed correlation estimator."""
    n = len(x)
    xbar = sum(x) / n
    ybar = sum(y) / n
    num = sum((xi - xbar) * (yi - ybar) for xi, yi in zip(x, y))
    denx = sum((xi - xbar) ** 2 for xi in x) ** 0.5
    deny = sum((yi - ybar) ** 2 for yi in y) ** 0.5
    return num / (denx * deny)


@pytest.fixture
def recovery_points() -> np.ndarray:
    """Ten points drawn uniformly in [-1, 1]^3."""
    return np.random.default_rng(7).uniform(-1.0, 1.0, (10, 3))


@pytest.fixture
def small_config() -> Configuration:
    rng = np.random.default_rng(3)
    return Configuration(
        coords=rng.normal(size=(6, 2)), labels=tuple(f"s{i}" for i in range(6))
    )
