"""File-format adapters for the extraction pipeline's artifacts.

The harness deliberately talks to the feature extractor only through its
exported files: combined.csv (classical + quantum columns + label),
foldplan.json (repeated stratified fold assignments), and manifest.json
(column provenance and artifact digests). Nothing here imports the
extractor package.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np


class HarnessError(ValueError):
    pass


BLOCKS = ("classical", "1-body", "2-body", "3-body")


def block_of(name: str) -> str:
    """Provenance block of a feature column, by descriptor prefix."""
    if name.startswith("q1_"):
        return "1-body"
    if name.startswith("q2_"):
        return "2-body"
    if name.startswith("q3_"):
        return "3-body"
    return "classical"


@dataclass(frozen=True)
class FeatureTable:
    """Feature matrix plus binary labels, loaded from combined.csv."""

    names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        if self.X.ndim != 2 or self.X.shape != (self.y.shape[0], len(self.names)):
            raise HarnessError("feature matrix shape mismatch")
        if len(set(self.names)) != len(self.names):
            raise HarnessError("duplicate feature names")
        if not np.all(np.isfinite(self.X)):
            raise HarnessError("non-finite feature values")
        if not np.all(np.isin(self.y, (0, 1))):
            raise HarnessError("labels must be 0/1")

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def subset(self, keep) -> "FeatureTable":
        """New table restricted to the named columns, original order kept."""
        keep = set(keep)
        unknown = keep - set(self.names)
        if unknown:
            raise HarnessError(f"unknown feature names: {sorted(unknown)}")
        idx = [j for j, nm in enumerate(self.names) if nm in keep]
        return FeatureTable(
            names=tuple(self.names[j] for j in idx), X=self.X[:, idx], y=self.y
        )

    def replaced(self, names, X) -> "FeatureTable":
        return FeatureTable(names=tuple(names), X=np.asarray(X, float), y=self.y)

    @classmethod
    def load(cls, path, label_column: str = "label") -> "FeatureTable":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise HarnessError(f"{path}: empty file") from None
            if label_column not in header:
                raise HarnessError(f"{path}: no {label_column!r} column")
            li = header.index(label_column)
            names = tuple(h for i, h in enumerate(header) if i != li)
            rows, labels = [], []
            for ln, row in enumerate(reader, start=2):
                if len(row) != len(header):
                    raise HarnessError(f"{path}:{ln}: wrong column count")
                try:
                    labels.append(int(row[li]))
                    rows.append([float(v) for i, v in enumerate(row) if i != li])
                except ValueError as exc:
                    raise HarnessError(f"{path}:{ln}: {exc}") from None
        if not rows:
            raise HarnessError(f"{path}: no data rows")
        return cls(names=names, X=np.array(rows, dtype=np.float64),
                   y=np.array(labels, dtype=np.intp))


@dataclass(frozen=True)
class FoldPlan:
    """Read-only view of the extractor's fold plan; never re-splits."""

    n_splits: int
    n_repeats: int
    assignments: tuple  # assignments[r][s] = sorted test-row indices

    @classmethod
    def load(cls, path) -> "FoldPlan":
        with open(path) as fh:
            obj = json.load(fh)
        try:
            plan = cls(
                n_splits=int(obj["n_splits"]),
                n_repeats=int(obj["n_repeats"]),
                assignments=tuple(
                    tuple(tuple(int(i) for i in split) for split in rep)
                    for rep in obj["assignments"]
                ),
            )
        except (KeyError, TypeError) as exc:
            raise HarnessError(f"{path}: malformed fold plan ({exc})") from None
        plan.check()
        return plan

    def check(self, n_samples: int | None = None) -> None:
        if len(self.assignments) != self.n_repeats:
            raise HarnessError("repeat count does not match assignments")
        for r, rep in enumerate(self.assignments):
            if len(rep) != self.n_splits:
                raise HarnessError(f"repeat {r}: split count mismatch")
            flat = sorted(i for split in rep for i in split)
            if len(set(flat)) != len(flat):
                raise HarnessError(f"repeat {r}: overlapping test splits")
            if n_samples is not None and flat != list(range(n_samples)):
                raise HarnessError(
                    f"repeat {r}: test splits do not partition "
                    f"{n_samples} samples"
                )

    def folds(self):
        """(repeat, split, train_rows, test_rows) in deterministic order."""
        for r, rep in enumerate(self.assignments):
            n = sum(len(s) for s in rep)
            for s, test in enumerate(rep):
                tset = set(test)
                train = np.array([i for i in range(n) if i not in tset],
                                 dtype=np.intp)
                yield r, s, train, np.array(test, dtype=np.intp)

    @property
    def n_folds(self) -> int:
        return self.n_splits * self.n_repeats


def check_against_manifest(table: FeatureTable, manifest_path) -> None:
    """Schema check: the quantum columns of combined.csv must match the
    manifest's observable list, with the classical block in front."""
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    observables = tuple(manifest.get("observables", []))
    if table.names[len(table.names) - len(observables):] != observables:
        raise HarnessError(
            "feature table does not match manifest: trailing columns are not "
            f"the {len(observables)} declared observables"
        )
    classical = table.names[: len(table.names) - len(observables)]
    bad = [nm for nm in classical if block_of(nm) != "classical"]
    if bad:
        raise HarnessError(
            f"quantum-style columns outside the observable block: {bad[:5]}"
        )
