"""Histogram mutual information, normalized MI, and hypercoupling coefficients.

Columns are discretized by equal-frequency (quantile) binning; a column with
fewer distinct values than bins keeps one bin per distinct value. All
entropies are in nats. Normalized MI uses the geometric-mean form
I / sqrt(H_a * H_b), defined as 0 when either marginal entropy vanishes.

The coefficient attached to a k-body interaction subset S is the arithmetic
mean of the pairwise (normalized) MI over all unordered pairs inside S.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset


class InfoError(ValueError):
    pass


def default_bins(n_samples: int) -> int:
    return max(2, min(16, int(np.sqrt(n_samples))))


def _discretize(col: np.ndarray, bins: int) -> tuple[np.ndarray, int]:
    """Return integer codes and the number of occupied bins.

    Equal-frequency bin edges from quantiles; columns with <= bins distinct
    values get one code per value so discrete columns (e.g. binary labels)
    keep their exact distribution.
    """
    uniq = np.unique(col)
    if uniq.size <= bins:
        codes = np.searchsorted(uniq, col)
        return codes, uniq.size
    edges = np.quantile(col, np.linspace(0.0, 1.0, bins + 1)[1:-1])
    codes = np.searchsorted(edges, col, side="right")
    return codes, bins


def _entropy_sorted(counts: np.ndarray) -> float:
    # Summation over sorted counts keeps the result invariant under any
    # reordering of the histogram cells (bit-exact MI symmetry).
    c = np.sort(counts[counts > 0])
    p = c / c.sum()
    return float(-(p * np.log(p)).sum())


def _joint_counts(ca: np.ndarray, na: int, cb: np.ndarray, nb: int) -> np.ndarray:
    return np.bincount(ca * nb + cb, minlength=na * nb)


def _check_pair(a: np.ndarray, b: np.ndarray, bins: int) -> None:
    if a.shape != b.shape or a.ndim != 1:
        raise InfoError("columns must be 1-d and of equal length")
    if a.size < 2:
        raise InfoError("need at least 2 samples")
    if bins < 2:
        raise InfoError("bins must be >= 2")
    if bins > a.size:
        raise InfoError(f"bins ({bins}) exceeds sample count ({a.size})")


def mutual_info(a, b, bins: int) -> float:
    """Pairwise MI in nats over the joint equal-frequency histogram."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_pair(a, b, bins)
    ca, na = _discretize(a, bins)
    cb, nb = _discretize(b, bins)
    h_a = _entropy_sorted(np.bincount(ca, minlength=na))
    h_b = _entropy_sorted(np.bincount(cb, minlength=nb))
    h_ab = _entropy_sorted(_joint_counts(ca, na, cb, nb))
    return max(0.0, h_a + h_b - h_ab)


def normalized_mi(a, b, bins: int) -> float:
    """MI normalized by sqrt(H_a * H_b); 0 when either entropy is 0."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_pair(a, b, bins)
    ca, na = _discretize(a, bins)
    cb, nb = _discretize(b, bins)
    h_a = _entropy_sorted(np.bincount(ca, minlength=na))
    h_b = _entropy_sorted(np.bincount(cb, minlength=nb))
    if h_a == 0.0 or h_b == 0.0:
        return 0.0
    h_ab = _entropy_sorted(_joint_counts(ca, na, cb, nb))
    i = max(0.0, h_a + h_b - h_ab)
    return min(1.0, i / np.sqrt(h_a * h_b))


@dataclass(frozen=True)
class MIMatrix:
    """Symmetric normalized-MI matrix over feature columns, unit diagonal."""

    values: np.ndarray
    bins: int

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.n, "bins": self.bins,
             "values": [[float(v) for v in row] for row in self.values]},
            separators=(",", ":"), sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "MIMatrix":
        obj = json.loads(text)
        return cls(values=np.array(obj["values"], dtype=np.float64),
                   bins=int(obj["bins"]))


def mi_matrix(ds: Dataset, rows, bins: int) -> MIMatrix:
    """All-pairs normalized MI over the given (training) rows."""
    rows = np.asarray(rows, dtype=np.intp)
    sub = ds.X[rows]
    n = ds.n_features
    codes = []
    for j in range(n):
        _check_pair(sub[:, j], sub[:, j], bins)
        codes.append(_discretize(sub[:, j], bins))
    ent = [_entropy_sorted(np.bincount(c, minlength=k)) for c, k in codes]
    values = np.eye(n)
    for a in range(n):
        ca, na = codes[a]
        for b in range(a + 1, n):
            if ent[a] == 0.0 or ent[b] == 0.0:
                continue
            cb, nb = codes[b]
            h_ab = _entropy_sorted(_joint_counts(ca, na, cb, nb))
            i = max(0.0, ent[a] + ent[b] - h_ab)
            values[a, b] = values[b, a] = min(1.0, i / np.sqrt(ent[a] * ent[b]))
    return MIMatrix(values=values, bins=bins)


def hyper_coeff(S, M: MIMatrix) -> float:
    """Mean pairwise entry of M over all unordered pairs within S."""
    idx = sorted(set(int(i) for i in S))
    if len(idx) < 2:
        raise InfoError("subset must have at least 2 distinct indices")
    pairs = list(itertools.combinations(idx, 2))
    return float(sum(M.values[a, b] for a, b in pairs) / len(pairs))


@dataclass(frozen=True)
class HyperCoeffs:
    """Coefficients for k-body interaction subsets, keyed by sorted tuple."""

    order: int
    coeffs: dict

    @classmethod
    def from_mi(cls, M: MIMatrix, subsets, order: int) -> "HyperCoeffs":
        out = {}
        for S in subsets:
            key = tuple(sorted(int(i) for i in S))
            if len(key) != order:
                raise InfoError(f"subset {key} is not order {order}")
            out[key] = hyper_coeff(key, M)
        return cls(order=order, coeffs=out)

    def __getitem__(self, S) -> float:
        key = tuple(sorted(int(i) for i in S))
        try:
            return self.coeffs[key]
        except KeyError:
            raise InfoError(f"no coefficient for subset {key}") from None


def select_features(ds: Dataset, rows, target_count: int, bins: int) -> list[int]:
    """Top features by MI(feature, label) on training rows.

    Ties break by ascending column index; the returned list is in rank order.
    """
    if target_count <= 0:
        raise InfoError("target_count must be positive")
    if target_count > ds.n_features:
        raise InfoError("target_count exceeds feature count")
    rows = np.asarray(rows, dtype=np.intp)
    sub = ds.X[rows]
    lab = ds.y[rows].astype(np.float64)
    scores = [mutual_info(sub[:, j], lab, bins) for j in range(ds.n_features)]
    order = sorted(range(ds.n_features), key=lambda j: (-scores[j], j))
    return order[:target_count]
