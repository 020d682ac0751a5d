"""Tabular dataset ingestion, scaling, and stratified fold planning.

Feature values are rescaled per column to [-1, +1] using min/max statistics
fitted on training rows only; out-of-range values seen at transform time are
clipped. Labels are mapped to {0, 1} by sorted order of their string form.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.model_selection import StratifiedKFold


class DatasetError(ValueError):
    """Raised for malformed input files or invalid dataset operations."""


@dataclass(frozen=True)
class Dataset:
    """Validated tabular dataset: feature matrix X, binary labels y."""

    names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if self.X.ndim != 2:
            raise DatasetError("X must be 2-dimensional")
        if self.X.shape[0] != self.y.shape[0]:
            raise DatasetError(
                f"X has {self.X.shape[0]} rows but y has {self.y.shape[0]} entries"
            )
        if len(self.names) != self.X.shape[1]:
            raise DatasetError(
                f"{len(self.names)} column names for {self.X.shape[1]} columns"
            )
        if len(set(self.names)) != len(self.names):
            raise DatasetError("duplicate column names")
        if not np.all(np.isfinite(self.X)):
            raise DatasetError("X contains NaN/Inf values")
        if not np.isin(self.y, (0, 1)).all():
            raise DatasetError("y must contain only 0/1 labels")

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]


def load_csv(path, label_column: str, delimiter: str = ",") -> Dataset:
    """Load a delimited text file with a header row into a Dataset.

    The label column must hold exactly two distinct values; they are mapped
    to {0, 1} by sorted order of their string representations.
    """
    try:
        fh = open(path, newline="")
    except FileNotFoundError:
        raise DatasetError(f"no such file: {path}") from None
    with fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"empty file: {path}") from None
        if len(set(header)) != len(header):
            raise DatasetError("duplicate column names in header")
        if label_column not in header:
            raise DatasetError(f"label column {label_column!r} not in header")
        label_idx = header.index(label_column)
        names = tuple(h for i, h in enumerate(header) if i != label_idx)

        rows: list[list[float]] = []
        labels: list[str] = []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(header):
                raise DatasetError(f"row {lineno}: expected {len(header)} cells")
            vals = []
            for i, cell in enumerate(rec):
                if i == label_idx:
                    labels.append(cell.strip())
                    continue
                try:
                    v = float(cell)
                except ValueError:
                    raise DatasetError(
                        f"row {lineno}, column {header[i]!r}: non-numeric value {cell!r}"
                    ) from None
                if not math.isfinite(v):
                    raise DatasetError(
                        f"row {lineno}, column {header[i]!r}: non-finite value {cell!r}"
                    )
                vals.append(v)
            rows.append(vals)

    classes = sorted(set(labels))
    if len(classes) != 2:
        raise DatasetError(
            f"label column must have exactly 2 distinct values, found {len(classes)}"
        )
    y = np.array([classes.index(v) for v in labels], dtype=np.int64)
    X = np.array(rows, dtype=np.float64)
    return Dataset(names=names, X=X, y=y)


@dataclass(frozen=True)
class ScalingSpec:
    """Per-column min/max fitted on training rows; maps into [-1, +1]."""

    mins: np.ndarray
    maxs: np.ndarray

    @property
    def constant_mask(self) -> np.ndarray:
        return self.maxs == self.mins


def fit_scaler(ds: Dataset, rows) -> ScalingSpec:
    """Compute per-column min/max over the given row subset only."""
    rows = np.asarray(rows, dtype=np.intp)
    if rows.size == 0:
        raise DatasetError("cannot fit scaler on an empty row subset")
    sub = ds.X[rows]
    return ScalingSpec(mins=sub.min(axis=0), maxs=sub.max(axis=0))


def apply_scaler(spec: ScalingSpec, x) -> np.ndarray:
    """Map a feature vector (or matrix) into [-1, 1] per column, clipping.

    Constant columns (max == min on the training rows) map to 0.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != spec.mins.shape[0]:
        raise DatasetError(
            f"expected {spec.mins.shape[0]} features, got {x.shape[-1]}"
        )
    span = spec.maxs - spec.mins
    safe = np.where(spec.constant_mask, 1.0, span)
    out = 2.0 * (x - spec.mins) / safe - 1.0
    out = np.where(spec.constant_mask, 0.0, out)
    return np.clip(out, -1.0, 1.0)


def invert_scaler(spec: ScalingSpec, z) -> np.ndarray:
    """Inverse of apply_scaler on non-clipped, non-constant columns."""
    z = np.asarray(z, dtype=np.float64)
    span = spec.maxs - spec.mins
    return (z + 1.0) * span / 2.0 + spec.mins


@dataclass(frozen=True)
class FoldPlan:
    """Repeated stratified K-fold assignments, reproducible from the seed.

    ``assignments[r][s]`` is the sorted list of test-sample indices of split
    ``s`` in repeat ``r``; within each repeat the splits partition the sample
    index set.
    """

    n_splits: int
    n_repeats: int
    seed: int
    assignments: tuple = field(default_factory=tuple)

    def train_rows(self, repeat: int, split: int) -> np.ndarray:
        test = set(self.assignments[repeat][split])
        n = sum(len(s) for s in self.assignments[repeat])
        return np.array([i for i in range(n) if i not in test], dtype=np.intp)

    def test_rows(self, repeat: int, split: int) -> np.ndarray:
        return np.array(self.assignments[repeat][split], dtype=np.intp)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_splits": self.n_splits,
                "n_repeats": self.n_repeats,
                "seed": self.seed,
                "assignments": [
                    [list(split) for split in rep] for rep in self.assignments
                ],
            },
            separators=(",", ":"),
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "FoldPlan":
        obj = json.loads(text)
        return cls(
            n_splits=obj["n_splits"],
            n_repeats=obj["n_repeats"],
            seed=obj["seed"],
            assignments=tuple(
                tuple(tuple(split) for split in rep) for rep in obj["assignments"]
            ),
        )


def make_folds(ds: Dataset, n_splits: int, n_repeats: int, seed: int) -> FoldPlan:
    """Build a deterministic repeated stratified K-fold plan."""
    if n_splits < 2:
        raise DatasetError("n_splits must be >= 2")
    counts = np.bincount(ds.y, minlength=2)
    if counts.min() < n_splits:
        raise DatasetError(
            f"smallest class has {counts.min()} members, cannot stratify into "
            f"{n_splits} splits"
        )
    assignments = []
    for r in range(n_repeats):
        skf = StratifiedKFold(n_splits=n_splits, shuffle=True, random_state=seed + r)
        rep = []
        for _, test_idx in skf.split(ds.X, ds.y):
            rep.append(tuple(int(i) for i in sorted(test_idx)))
        assignments.append(tuple(rep))
    return FoldPlan(
        n_splits=n_splits, n_repeats=n_repeats, seed=seed,
        assignments=tuple(assignments),
    )
