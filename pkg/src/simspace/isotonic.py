"""Least-squares monotone regression via pool-adjacent-violators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, NonpositiveWeight


@dataclass(frozen=True)
class MonotoneFit:
    """Nondecreasing fit and its weighted sum of squared residuals."""

    fitted: np.ndarray
    sse: float


def pava(values, weights=None) -> MonotoneFit:
    """Weighted least-squares nondecreasing fit of ``values``.

    Pools adjacent violating blocks into their weighted means until the
    block means are nondecreasing, which yields the unique minimizer of
    sum(w_i * (values_i - fitted_i)^2) over nondecreasing sequences.
    Runs in linear time after the single left-to-right pass.

    Parameters
    ----------
    values : array_like
        Sequence to fit, in the order whose monotonicity matters.
    weights : array_like, optional
        Positive weights, same length as ``values``.  Default: all one.

    Returns
    -------
    MonotoneFit
    """
    y = np.asarray(values, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise EmptyInput("values must be a nonempty vector")
    if weights is None:
        w = np.ones_like(y)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != y.shape:
            raise NonpositiveWeight("weights must match values in length")
        if (w <= 0).any():
            raise NonpositiveWeight("weights must all be positive")

    # Blocks kept as parallel stacks: pooled mean, pooled weight, length.
    means: list[float] = []
    sums: list[float] = []
    counts: list[int] = []
    for yi, wi in zip(y.tolist(), w.tolist()):
        means.append(yi)
        sums.append(wi)
        counts.append(1)
        while len(means) > 1 and means[-2] > means[-1]:
            m2, s2, c2 = means.pop(), sums.pop(), counts.pop()
            s1 = sums[-1]
            means[-1] = (s1 * means[-1] + s2 * m2) / (s1 + s2)
            sums[-1] = s1 + s2
            counts[-1] += c2

    fitted = np.repeat(means, counts)
    sse = float(np.sum(w * (y - fitted) ** 2))
    return MonotoneFit(fitted=fitted, sse=sse)
