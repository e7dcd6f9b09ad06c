"""Metric and nonmetric SMACOF multidimensional scaling.

Stress of a configuration X against dissimilarities delta is

    stress = sqrt( sum_{i<j} (d_ij - dhat_ij)^2 / sum_{i<j} d_ij^2 )

with d_ij the Euclidean distances in X.  In metric mode the reference
values are dhat = a * delta with the least-squares optimal scalar a; in
nonmetric mode dhat is the best nondecreasing fit of the distances
taken in ascending-delta order (ties carry no constraint: equal deltas
are ordered among themselves by ascending distance before fitting).

Each restart starts from an i.i.d. uniform [-1, 1] configuration drawn
from its own deterministic stream and repeatedly applies the Guttman
transform X <- B(X) X / n, where B has off-diagonal entries
-dhat_ij/d_ij (zero for coincident points) and a diagonal making the
rows sum to zero.  The traced stress value is nonincreasing from one
update to the next; iteration stops once the decrease falls below the
convergence threshold or the iteration cap is reached.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._parallel import ordered_map
from ._rng import derive_rng
from .data import Configuration, DissimilarityMatrix
from .errors import DegenerateConfiguration, ValidationError
from .isotonic import pava

MODES = ("metric", "nonmetric")


@dataclass(frozen=True)
class MdsOptions:
    """Settings for one multidimensional-scaling fit."""

    mode: str
    dims: int
    seed: int
    restarts: int = 256
    max_iterations: int = 1000
    convergence_epsilon: float = 1e-6

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.dims < 1:
            raise ValidationError("dims must be >= 1")
        if self.restarts < 1:
            raise ValidationError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if not self.convergence_epsilon > 0:
            raise ValidationError("convergence_epsilon must be > 0")


@dataclass(frozen=True)
class MdsResult:
    """Winning configuration plus per-restart diagnostics."""

    configuration: Configuration
    stress: float
    restart_stresses: tuple[float, ...]
    iterations_used: tuple[int, ...]
    stress_traces: tuple[tuple[float, ...], ...] | None = None

    @property
    def best_restart(self) -> int:
        return int(np.argmin(self.restart_stresses))


@dataclass(frozen=True)
class SweepEntry:
    """One row of a Scree table."""

    dims: int
    result: MdsResult
    metric_stress: float
    nonmetric_stress: float


def _condensed_distances(coords: np.ndarray) -> np.ndarray:
    """Upper-triangle Euclidean distances (i<j, row-major)."""
    sq = np.sum(coords**2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (coords @ coords.T)
    iu = np.triu_indices(coords.shape[0], k=1)
    return np.sqrt(np.maximum(d2[iu], 0.0))


def _squareform(vec: np.ndarray, n: int) -> np.ndarray:
    full = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    full[iu] = vec
    return full + full.T


def _metric_disparities(d: np.ndarray, delta: np.ndarray) -> tuple[np.ndarray, float]:
    denom = float(delta @ delta)
    a = float(d @ delta) / denom if denom > 0 else 0.0
    dhat = a * delta
    sse = float(np.sum((d - dhat) ** 2))
    return dhat, sse


def _nonmetric_disparities(d: np.ndarray, delta: np.ndarray) -> tuple[np.ndarray, float]:
    order = np.lexsort((d, delta))
    fit = pava(d[order])
    dhat = np.empty_like(d)
    dhat[order] = fit.fitted
    return dhat, fit.sse


_DISPARITIES = {"metric": _metric_disparities, "nonmetric": _nonmetric_disparities}


def evaluate_stress(
    config: Configuration, delta: DissimilarityMatrix, mode: str
) -> float:
    """Stress of ``config`` against ``delta`` in the given mode.

    Rows are aligned by label.  Invariant under rotation, translation
    and uniform positive scaling of the configuration.
    """
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")
    coords = config.aligned_to(delta.labels)
    d = _condensed_distances(coords)
    denom = float(d @ d)
    if denom == 0.0:
        raise DegenerateConfiguration("all points coincide; stress undefined")
    _, sse = _DISPARITIES[mode](d, delta.pair_values())
    return float(np.sqrt(max(sse, 0.0) / denom))


def _guttman_update(
    coords: np.ndarray, dist_full: np.ndarray, dhat_full: np.ndarray
) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(dist_full > 0.0, dhat_full / dist_full, 0.0)
    b = -ratio
    np.fill_diagonal(b, 0.0)
    np.fill_diagonal(b, ratio.sum(axis=1))
    return (b @ coords) / coords.shape[0]


def _run_restart(
    delta_vec: np.ndarray,
    n: int,
    options: MdsOptions,
    restart: int,
) -> tuple[float, np.ndarray, int, tuple[float, ...]]:
    rng = derive_rng(options.seed, restart)
    coords = rng.uniform(-1.0, 1.0, size=(n, options.dims))
    metric = options.mode == "metric"
    disparities = _DISPARITIES[options.mode]

    trace: list[float] = []
    updates = 0
    stress = np.inf
    previous = None
    while True:
        d = _condensed_distances(coords)
        denom = float(d @ d)
        if denom == 0.0:
            stress = np.inf
            break
        dhat, sse = disparities(d, delta_vec)
        stress = float(np.sqrt(max(sse, 0.0) / denom))
        trace.append(stress)
        if previous is not None and previous - stress < options.convergence_epsilon:
            break
        previous = stress
        if updates >= options.max_iterations:
            break
        if not metric:
            # Rescale so sum(dhat^2) = sum(d^2); keeps the configuration
            # scale from collapsing while leaving stress untouched.
            norm = float(dhat @ dhat)
            if norm > 0.0:
                dhat = dhat * np.sqrt(denom / norm)
        coords = _guttman_update(coords, _squareform(d, n), _squareform(dhat, n))
        updates += 1

    coords = coords - coords.mean(axis=0)
    return stress, coords, updates, tuple(trace)


def fit_mds(
    delta: DissimilarityMatrix,
    options: MdsOptions,
    *,
    record_traces: bool = False,
) -> MdsResult:
    """Fit a similarity space to ``delta`` with random-restart SMACOF.

    Each restart draws its initial configuration from a stream keyed by
    (seed, restart index), so results are independent of execution
    order and of the restart count of other runs.  The minimum-stress
    restart wins; ties break toward the lowest restart index.

    Parameters
    ----------
    delta : DissimilarityMatrix
    options : MdsOptions
    record_traces : bool
        Also return the per-iteration stress trace of every restart.

    Returns
    -------
    MdsResult
    """
    if delta.n < 2:
        raise ValidationError("need at least two stimuli")
    delta_vec = delta.pair_values()
    results = ordered_map(
        lambda r: _run_restart(delta_vec, delta.n, options, r),
        range(options.restarts),
    )
    stresses = tuple(res[0] for res in results)
    best = int(np.argmin(stresses))
    configuration = Configuration(coords=results[best][1], labels=delta.labels)
    return MdsResult(
        configuration=configuration,
        stress=stresses[best],
        restart_stresses=stresses,
        iterations_used=tuple(res[2] for res in results),
        stress_traces=tuple(res[3] for res in results) if record_traces else None,
    )


def dimension_sweep(
    delta: DissimilarityMatrix,
    dims_range: tuple[int, int],
    options: MdsOptions,
    *,
    record_traces: bool = False,
) -> list[SweepEntry]:
    """Fit one space per dimensionality and tabulate both stress kinds.

    ``dims_range`` is inclusive; ``options.dims`` is overridden per
    entry.  Every solution is evaluated under both the optimized mode
    and the other one, which is the data behind a Scree plot.
    """
    lo, hi = dims_range
    if lo < 1 or hi < lo:
        raise ValidationError(f"invalid dimension range {dims_range}")
    entries = []
    for dims in range(lo, hi + 1):
        result = fit_mds(
            delta, replace(options, dims=dims), record_traces=record_traces
        )
        entries.append(
            SweepEntry(
                dims=dims,
                result=result,
                metric_stress=evaluate_stress(result.configuration, delta, "metric"),
                nonmetric_stress=evaluate_stress(
                    result.configuration, delta, "nonmetric"
                ),
            )
        )
    return entries
