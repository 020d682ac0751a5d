"""Path-dependent SHAP values for sklearn gradient-boosted trees.

Implements the polynomial-time TreeSHAP recursion directly on the fitted
sklearn tree arrays (children_left / children_right / feature / threshold /
value / weighted_n_node_samples). The cover weights stored by the training
data define the conditional expectations, i.e. the "tree_path_dependent"
convention.

Two entry points:
  - shap_values(model, X): per-sample, per-feature attributions of the
    model's raw decision function (log-odds for binary classification).
  - expected_value(model): the base value; attributions satisfy
    base + sum(phi) == decision_function(x) up to float error, which the
    tests assert against both sklearn and a brute-force Shapley oracle.
"""
from __future__ import annotations

import numpy as np
from sklearn.ensemble import GradientBoostingClassifier


class _Path:
    """One element of the active feature path: (feature, zero-fraction,
    one-fraction, permutation weight)."""

    __slots__ = ("d", "z", "o", "w")

    def __init__(self, d, z, o, w):
        self.d, self.z, self.o, self.w = d, z, o, w


def _extend(m: list, pz: float, po: float, pi: int) -> list:
    out = [_Path(e.d, e.z, e.o, e.w) for e in m]
    out.append(_Path(pi, pz, po, 1.0 if not m else 0.0))
    l = len(out) - 1
    for i in range(l - 1, -1, -1):
        out[i + 1].w += po * out[i].w * (i + 1) / (l + 1)
        out[i].w = pz * out[i].w * (l - i) / (l + 1)
    return out


def _unwind(m: list, i: int) -> list:
    l = len(m) - 1
    out = [_Path(e.d, e.z, e.o, e.w) for e in m[:-1]]
    n = m[l].w
    z, o = m[i].z, m[i].o
    for j in range(l - 1, -1, -1):
        if o != 0.0:
            t = out[j].w
            out[j].w = n * (l + 1) / ((j + 1) * o)
            n = t - out[j].w * z * (l - j) / (l + 1)
        else:
            out[j].w = out[j].w * (l + 1) / (z * (l - j))
    for j in range(i, l):
        out[j].d, out[j].z, out[j].o = m[j + 1].d, m[j + 1].z, m[j + 1].o
    return out


def _unwound_sum(m: list, i: int) -> float:
    l = len(m) - 1
    z, o = m[i].z, m[i].o
    total = 0.0
    if o != 0.0:
        n = m[l].w
        for j in range(l - 1, -1, -1):
            t = n * (l + 1) / ((j + 1) * o)
            total += t
            n = m[j].w - t * z * (l - j) / (l + 1)
    else:
        for j in range(l - 1, -1, -1):
            total += m[j].w * (l + 1) / (z * (l - j))
    return total


def _tree_shap(tree, x: np.ndarray, phi: np.ndarray, scale: float) -> None:
    left, right = tree.children_left, tree.children_right
    feat, thresh = tree.feature, tree.threshold
    value = tree.value[:, 0, 0]
    cover = tree.weighted_n_node_samples

    def recurse(j: int, m: list, pz: float, po: float, pi: int) -> None:
        m = _extend(m, pz, po, pi)
        if left[j] < 0:
            leaf = value[j] * scale
            for i in range(1, len(m)):
                phi[m[i].d] += _unwound_sum(m, i) * (m[i].o - m[i].z) * leaf
            return
        f = feat[j]
        hot, cold = (left[j], right[j]) if x[f] <= thresh[j] else (right[j], left[j])
        iz = io = 1.0
        k = next((i for i in range(1, len(m)) if m[i].d == f), None)
        if k is not None:
            iz, io = m[k].z, m[k].o
            m = _unwind(m, k)
        recurse(hot, m, iz * cover[hot] / cover[j], io, f)
        recurse(cold, m, iz * cover[cold] / cover[j], 0.0, f)

    recurse(0, [], 1.0, 1.0, -1)


def _tree_mean(tree, scale: float) -> float:
    """Cover-weighted mean leaf value: the tree's empty-coalition output."""
    value = tree.value[:, 0, 0]
    cover = tree.weighted_n_node_samples
    leaves = tree.children_left < 0
    return float(np.sum(value[leaves] * cover[leaves]) / cover[0]) * scale


def _stages(model: GradientBoostingClassifier):
    if model.n_classes_ != 2:
        raise ValueError("only binary classification models are supported")
    for stage in model.estimators_:
        yield stage[0].tree_, model.learning_rate


def expected_value(model: GradientBoostingClassifier) -> float:
    """Base value of the raw decision function (prior + tree means)."""
    base = float(model._raw_predict_init(np.zeros((1, model.n_features_in_)))[0, 0])
    return base + sum(_tree_mean(t, lr) for t, lr in _stages(model))


def shap_values(model: GradientBoostingClassifier, X) -> np.ndarray:
    """(n_samples, n_features) attributions of decision_function(X)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features_in_:
        raise ValueError(
            f"X must be (n_samples, {model.n_features_in_})"
        )
    trees = list(_stages(model))
    phi = np.zeros_like(X)
    for i in range(X.shape[0]):
        row = X[i]
        out = phi[i]
        for tree, lr in trees:
            _tree_shap(tree, row, out, lr)
    return phi


def conditional_expectation(tree, x: np.ndarray, known, scale: float) -> float:
    """E[f(x') | x'_S = x_S] under the tree's cover weights, for tests.

    `known` is the set of feature indices conditioned on. Exponential-cost
    brute-force Shapley built on this serves as the TreeSHAP oracle.
    """
    left, right = tree.children_left, tree.children_right
    feat, thresh = tree.feature, tree.threshold
    value = tree.value[:, 0, 0]
    cover = tree.weighted_n_node_samples

    def g(j: int) -> float:
        if left[j] < 0:
            return float(value[j])
        f = feat[j]
        if f in known:
            return g(left[j] if x[f] <= thresh[j] else right[j])
        return (cover[left[j]] * g(left[j]) + cover[right[j]] * g(right[j])) \
            / cover[j]

    return g(0) * scale
