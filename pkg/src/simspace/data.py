"""Core domain types and bit-exact CSV serialization.

All CSVs are UTF-8, comma-separated, ``.`` decimal point, first row a
header and first column a label.  Alignment between dissimilarities,
configurations and features is always by label, never by row order.
Floats are written with ``repr`` (shortest round-trip form), so a
save/load cycle reproduces every value exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DegenerateConfiguration,
    IoError,
    LabelMismatch,
    MalformedCsv,
    NegativeEntry,
    NonzeroDiagonal,
)

SYMMETRY_TOLERANCE = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


def _check_unique(labels: tuple[str, ...], kind: str) -> None:
    if len(set(labels)) != len(labels):
        raise MalformedCsv(f"duplicate {kind} labels")


@dataclass(frozen=True)
class DissimilarityMatrix:
    """Symmetric n-by-n matrix of pairwise stimulus dissimilarities."""

    values: np.ndarray
    labels: tuple[str, ...]
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        values = _frozen(self.values)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))
        n = len(self.labels)
        if values.ndim != 2 or values.shape != (n, n):
            raise MalformedCsv(
                f"dissimilarity grid is {values.shape}, expected {(n, n)}"
            )
        _check_unique(self.labels, "stimulus")
        if not np.isfinite(values).all():
            raise MalformedCsv("dissimilarities contain non-finite values")
        if (values < 0).any():
            raise NegativeEntry("dissimilarities must be nonnegative")
        if np.any(np.diag(values) != 0):
            raise NonzeroDiagonal("self-dissimilarities must be zero")
        if not np.array_equal(values, values.T):
            raise AsymmetricMatrix("dissimilarity matrix is not symmetric")

    @property
    def n(self) -> int:
        return len(self.labels)

    def pair_values(self) -> np.ndarray:
        """Upper-triangle entries (i<j, row-major), length n(n-1)/2."""
        iu = np.triu_indices(self.n, k=1)
        return self.values[iu]


@dataclass(frozen=True)
class Configuration:
    """n points in a t-dimensional similarity space, one label per point."""

    coords: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        coords = _frozen(np.atleast_2d(self.coords))
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))
        if coords.ndim != 2 or coords.shape[0] != len(self.labels):
            raise MalformedCsv(
                f"coordinate grid is {coords.shape}, expected "
                f"({len(self.labels)}, t)"
            )
        if coords.shape[1] < 1:
            raise MalformedCsv("configuration needs at least one dimension")
        _check_unique(self.labels, "point")
        if not np.isfinite(coords).all():
            raise MalformedCsv("coordinates contain non-finite values")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def t(self) -> int:
        return self.coords.shape[1]

    def aligned_to(self, labels: tuple[str, ...]) -> np.ndarray:
        """Coordinates reordered to match ``labels``; sets must agree."""
        if set(labels) != set(self.labels):
            raise LabelMismatch("configuration labels do not match")
        index = {label: i for i, label in enumerate(self.labels)}
        return self.coords[[index[label] for label in labels]]


@dataclass(frozen=True)
class FeatureMatrix:
    """Rows of K-dimensional feature vectors with sample and group ids.

    ``group_ids[i]`` names the original stimulus row ``i`` derives from;
    augmented variants of one stimulus share a group id.
    """

    values: np.ndarray
    sample_ids: tuple[str, ...]
    group_ids: tuple[str, ...]

    def __post_init__(self):
        values = _frozen(np.atleast_2d(self.values))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "sample_ids", tuple(str(s) for s in self.sample_ids))
        object.__setattr__(self, "group_ids", tuple(str(g) for g in self.group_ids))
        if values.ndim != 2 or values.shape[0] != len(self.sample_ids):
            raise MalformedCsv(
                f"feature grid is {values.shape}, expected "
                f"({len(self.sample_ids)}, k)"
            )
        if len(self.group_ids) != len(self.sample_ids):
            raise MalformedCsv("sample_ids and group_ids differ in length")
        _check_unique(self.sample_ids, "sample")
        if not np.isfinite(values).all():
            raise MalformedCsv("features contain non-finite values")

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]

    @property
    def groups(self) -> tuple[str, ...]:
        """Distinct group ids in first-appearance order."""
        return tuple(dict.fromkeys(self.group_ids))


@dataclass(frozen=True)
class TargetAssignment:
    """Mapping from group id to a target point in a similarity space."""

    group_labels: tuple[str, ...]
    points: np.ndarray
    shuffled: bool = False

    def __post_init__(self):
        points = _frozen(np.atleast_2d(self.points))
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "group_labels", tuple(self.group_labels))
        if points.shape[0] != len(self.group_labels):
            raise MalformedCsv("one target point per group required")
        _check_unique(self.group_labels, "group")

    @classmethod
    def from_configuration(cls, config: Configuration) -> "TargetAssignment":
        return cls(group_labels=config.labels, points=config.coords)

    @property
    def t(self) -> int:
        return self.points.shape[1]

    def targets_for(self, group_ids: tuple[str, ...]) -> np.ndarray:
        """Target matrix (len(group_ids), t), one row per input row."""
        index = {g: i for i, g in enumerate(self.group_labels)}
        missing = [g for g in group_ids if g not in index]
        if missing:
            raise LabelMismatch(f"no target point for groups {missing[:5]}")
        return self.points[[index[g] for g in group_ids]]


def normalize_configuration(config: Configuration) -> Configuration:
    """Center a configuration and scale it to unit mean squared norm.

    The returned space has per-dimension mean zero and the mean of the
    per-point squared Euclidean norms equal to one, so a regressor that
    always predicts the origin scores MSE 1 and R^2 0 on it.  Pairwise
    distance ratios are unchanged.

    Raises
    ------
    DegenerateConfiguration
        If all points coincide, so there is no scale to fix.
    """
    centered = config.coords - config.coords.mean(axis=0)
    scale = np.sqrt(np.mean(np.sum(centered**2, axis=1)))
    if scale == 0.0 or not np.isfinite(scale):
        raise DegenerateConfiguration("all points identical; scale undefined")
    return Configuration(coords=centered / scale, labels=config.labels)


# --- CSV serialization ---


def _fmt(x: float) -> str:
    return repr(float(x))


def _read_rows(path) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return [row for row in csv.reader(fh)]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def _parse_cell(cell: str, where: str) -> float:
    try:
        value = float(cell)
    except ValueError as exc:
        raise MalformedCsv(f"non-numeric cell {cell!r} at {where}") from exc
    if not np.isfinite(value):
        raise MalformedCsv(f"non-finite cell {cell!r} at {where}")
    return value


def load_dissimilarity_csv(path) -> DissimilarityMatrix:
    """Load a dissimilarity matrix CSV (header ``label,<l1>,...,<ln>``).

    Asymmetries up to 1e-9 (absolute) are averaged away; anything larger
    raises :class:`AsymmetricMatrix`.
    """
    rows = _read_rows(path)
    if not rows:
        raise MalformedCsv(f"{path} is empty")
    labels = tuple(rows[0][1:])
    n = len(labels)
    if n == 0:
        raise MalformedCsv("header carries no stimulus labels")
    body = rows[1:]
    if len(body) != n:
        raise MalformedCsv(f"expected {n} data rows, found {len(body)}")
    values = np.empty((n, n))
    for i, row in enumerate(body):
        if len(row) != n + 1:
            raise MalformedCsv(f"row {i + 2} has {len(row)} cells, expected {n + 1}")
        if row[0] != labels[i]:
            raise MalformedCsv(
                f"row label {row[0]!r} does not match header label {labels[i]!r}"
            )
        for j, cell in enumerate(row[1:]):
            values[i, j] = _parse_cell(cell, f"row {i + 2}, column {j + 2}")
    gap = np.abs(values - values.T).max() if n else 0.0
    if gap > SYMMETRY_TOLERANCE:
        raise AsymmetricMatrix(
            f"asymmetry {gap:.3g} exceeds tolerance {SYMMETRY_TOLERANCE:g}"
        )
    values = (values + values.T) / 2.0
    return DissimilarityMatrix(values=values, labels=labels)


def save_dissimilarity_csv(delta: DissimilarityMatrix, path) -> None:
    """Write a dissimilarity matrix in the format read back by the loader."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["label", *delta.labels])
            for label, row in zip(delta.labels, delta.values):
                writer.writerow([label, *(_fmt(v) for v in row)])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def save_configuration_csv(config: Configuration, path) -> None:
    """Write ``label,dim_1,...,dim_t`` rows at full decimal precision."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["label", *(f"dim_{d + 1}" for d in range(config.t))])
            for label, row in zip(config.labels, config.coords):
                writer.writerow([label, *(_fmt(v) for v in row)])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load_configuration_csv(path) -> Configuration:
    """Inverse of :func:`save_configuration_csv`."""
    rows = _read_rows(path)
    if len(rows) < 2:
        raise MalformedCsv(f"{path} has no data rows")
    width = len(rows[0])
    if width < 2:
        raise MalformedCsv("configuration header needs label plus dimensions")
    labels = []
    coords = np.empty((len(rows) - 1, width - 1))
    for i, row in enumerate(rows[1:]):
        if len(row) != width:
            raise MalformedCsv(f"row {i + 2} has {len(row)} cells, expected {width}")
        labels.append(row[0])
        for j, cell in enumerate(row[1:]):
            coords[i, j] = _parse_cell(cell, f"row {i + 2}, column {j + 2}")
    return Configuration(coords=coords, labels=tuple(labels))


def save_feature_csv(features: FeatureMatrix, path) -> None:
    """Write ``sample_id,group_id,x_1,...,x_k`` rows at full precision."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["sample_id", "group_id", *(f"x_{j + 1}" for j in range(features.k))]
            )
            for sid, gid, row in zip(
                features.sample_ids, features.group_ids, features.values
            ):
                writer.writerow([sid, gid, *(_fmt(v) for v in row)])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load_feature_csv(path) -> FeatureMatrix:
    """Inverse of :func:`save_feature_csv`.

    Leading ``#`` lines are skipped: feature producers may record their
    provenance (e.g. which network checkpoint) above the header.
    """
    rows = [r for r in _read_rows(path) if not (r and r[0].startswith("#"))]
    if len(rows) < 2:
        raise MalformedCsv(f"{path} has no data rows")
    width = len(rows[0])
    if width < 3:
        raise MalformedCsv("feature header needs sample_id, group_id and features")
    sample_ids, group_ids = [], []
    values = np.empty((len(rows) - 1, width - 2))
    for i, row in enumerate(rows[1:]):
        if len(row) != width:
            raise MalformedCsv(f"row {i + 2} has {len(row)} cells, expected {width}")
        sample_ids.append(row[0])
        group_ids.append(row[1])
        for j, cell in enumerate(row[2:]):
            values[i, j] = _parse_cell(cell, f"row {i + 2}, column {j + 3}")
    return FeatureMatrix(
        values=values, sample_ids=tuple(sample_ids), group_ids=tuple(group_ids)
    )
