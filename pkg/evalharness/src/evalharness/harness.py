"""Cross-validated evaluation protocol over a fixed fold plan.

The protocol is deliberately rigid: gradient boosting with a pinned
estimator count and seed, folds taken verbatim from the extractor's plan
(never re-split), metrics aggregated over all repeat x split test sets, and
SHAP importances computed on training rows only. Baselines (PCA / UMAP) run
the identical protocol on per-fold transformed features so no test row ever
influences a fit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from sklearn.decomposition import PCA
from sklearn.ensemble import GradientBoostingClassifier
from sklearn.metrics import (
    accuracy_score, confusion_matrix, precision_score, recall_score,
    roc_auc_score,
)

from .tables import BLOCKS, FeatureTable, FoldPlan, HarnessError, block_of
from .treeshap import shap_values

METRICS = ("auc", "accuracy", "precision", "recall")


@dataclass(frozen=True)
class ModelConfig:
    """Protocol knobs; everything else stays at library defaults."""

    n_estimators: int = 1000
    seed: int = 42
    shap_folds: int = 1     # leading folds whose train rows feed SHAP
    shap_rows: int = 200    # per-fold cap on rows attributed (seeded choice)

    def __post_init__(self):
        if self.n_estimators < 1:
            raise HarnessError("n_estimators must be >= 1")
        if self.shap_folds < 0 or self.shap_rows < 1:
            raise HarnessError("invalid shap budget")


@dataclass(frozen=True)
class EvalReport:
    """Deterministic summary of one protocol run."""

    metrics: dict            # metric -> {"mean", "std", "per_fold"}
    importance: dict         # feature name -> normalized mean |SHAP|
    provenance: dict         # block -> fraction of total importance
    selected: tuple          # feature names the models were trained on
    n_folds: int
    fold_counts: tuple       # per-fold confusion-matrix sample counts

    def __post_init__(self):
        for name, stats in self.metrics.items():
            if not 0.0 <= stats["mean"] <= 1.0:
                raise HarnessError(f"metric {name} mean outside [0, 1]")
        if self.importance:
            vals = np.array(list(self.importance.values()))
            if np.any(vals < 0) or abs(vals.sum() - 1.0) > 1e-9:
                raise HarnessError("importances must be >= 0 and sum to 1")

    def top_features(self, k: int) -> list[str]:
        if k <= 0:
            raise HarnessError("top_k must be positive")
        ranked = sorted(
            self.importance.items(), key=lambda kv: (-kv[1], kv[0])
        )
        return [nm for nm, _ in ranked[:k]]

    def to_json(self) -> str:
        return json.dumps(
            {
                "metrics": self.metrics,
                "importance": self.importance,
                "provenance": self.provenance,
                "selected": list(self.selected),
                "n_folds": self.n_folds,
                "fold_counts": list(self.fold_counts),
            },
            sort_keys=True, indent=1,
        )


def _fit_fold(X, y, train, cfg: ModelConfig) -> GradientBoostingClassifier:
    model = GradientBoostingClassifier(
        n_estimators=cfg.n_estimators, random_state=cfg.seed
    )
    model.fit(X[train], y[train])
    return model


def _fold_metrics(model, X, y, test) -> dict:
    prob = model.predict_proba(X[test])[:, 1]
    pred = (prob >= 0.5).astype(int)
    return {
        "auc": float(roc_auc_score(y[test], prob)),
        "accuracy": float(accuracy_score(y[test], pred)),
        "precision": float(precision_score(y[test], pred, zero_division=0)),
        "recall": float(recall_score(y[test], pred, zero_division=0)),
        "_count": int(confusion_matrix(y[test], pred).sum()),
    }


def _importance(models_and_trains, table: FeatureTable,
                cfg: ModelConfig) -> dict:
    """Mean |SHAP| over training rows of the designated folds, sum-1."""
    if not models_and_trains:
        return {}
    total = np.zeros(table.n_features)
    for fold_i, (model, train) in enumerate(models_and_trains):
        rows = train
        if len(rows) > cfg.shap_rows:
            rng = np.random.default_rng(cfg.seed + fold_i)
            rows = np.sort(rng.choice(rows, size=cfg.shap_rows, replace=False))
        total += np.abs(shap_values(model, table.X[rows])).mean(axis=0)
    total /= len(models_and_trains)
    s = total.sum()
    weights = total / s if s > 0 else np.full(table.n_features,
                                              1.0 / table.n_features)
    return {nm: float(w) for nm, w in zip(table.names, weights)}


def _provenance(importance: dict) -> dict:
    out = {b: 0.0 for b in BLOCKS}
    for nm, w in importance.items():
        out[block_of(nm)] += w
    return {b: float(v) for b, v in out.items()}


def evaluate(table: FeatureTable, plan: FoldPlan,
             cfg: ModelConfig = ModelConfig()) -> EvalReport:
    """Run the full protocol on a feature table with the given fold plan."""
    plan.check(table.n_samples)
    per_fold: dict = {m: [] for m in METRICS}
    counts = []
    shap_models = []
    for fold_i, (r, s, train, test) in enumerate(plan.folds()):
        model = _fit_fold(table.X, table.y, train, cfg)
        stats = _fold_metrics(model, table.X, table.y, test)
        if stats["_count"] != len(test):
            raise HarnessError(
                f"fold ({r},{s}): evaluated {stats['_count']} samples, "
                f"plan lists {len(test)}"
            )
        counts.append(stats.pop("_count"))
        for m in METRICS:
            per_fold[m].append(stats[m])
        if fold_i < cfg.shap_folds:
            shap_models.append((model, train))

    importance = _importance(shap_models, table, cfg)
    metrics = {
        m: {
            "mean": float(np.mean(v)),
            "std": float(np.std(v)),
            "per_fold": [float(x) for x in v],
        }
        for m, v in per_fold.items()
    }
    return EvalReport(
        metrics=metrics,
        importance=importance,
        provenance=_provenance(importance),
        selected=table.names,
        n_folds=plan.n_folds,
        fold_counts=tuple(counts),
    )


def shap_select(table: FeatureTable, plan: FoldPlan, top_k: int,
                cfg: ModelConfig = ModelConfig()) -> tuple[list, EvalReport]:
    """Keep the top_k features by train-fold mean |SHAP|, then re-evaluate."""
    if top_k <= 0:
        raise HarnessError("top_k must be positive")
    if top_k > table.n_features:
        raise HarnessError(
            f"top_k {top_k} exceeds {table.n_features} features"
        )
    first = evaluate(table, plan, cfg)
    keep = first.top_features(top_k)
    report = evaluate(table.subset(keep), plan, cfg)
    return keep, report


def _umap_reducer(components: int, seed: int):
    try:
        import umap
    except ImportError:
        raise HarnessError(
            "UMAP baseline requires the optional 'umap-learn' package "
            "(pip install umap-learn)"
        ) from None
    return umap.UMAP(n_components=components, random_state=seed)


def baseline_compare(table: FeatureTable, plan: FoldPlan, method: str,
                     components: int,
                     cfg: ModelConfig = ModelConfig()) -> EvalReport:
    """Identical protocol on per-fold dimensionality-reduced features.

    The reducer is fitted on each fold's training rows only; test rows are
    transformed with the fitted reducer, so the no-leakage invariant holds
    for the baselines too.
    """
    if components < 1 or components > table.n_features:
        raise HarnessError(
            f"components must be in [1, {table.n_features}]"
        )
    if method not in ("pca", "umap"):
        raise HarnessError(f"unknown baseline method {method!r}")

    plan.check(table.n_samples)
    per_fold: dict = {m: [] for m in METRICS}
    counts = []
    for r, s, train, test in plan.folds():
        if method == "pca":
            reducer = PCA(n_components=components, random_state=cfg.seed)
        else:
            reducer = _umap_reducer(components, cfg.seed)
        Xt = np.empty((table.n_samples, components))
        Xt[train] = reducer.fit_transform(table.X[train])
        Xt[test] = reducer.transform(table.X[test])
        model = _fit_fold(Xt, table.y, train, cfg)
        stats = _fold_metrics(model, Xt, table.y, test)
        counts.append(stats.pop("_count"))
        for m in METRICS:
            per_fold[m].append(stats[m])

    names = tuple(f"{method}_{i}" for i in range(components))
    metrics = {
        m: {
            "mean": float(np.mean(v)),
            "std": float(np.std(v)),
            "per_fold": [float(x) for x in v],
        }
        for m, v in per_fold.items()
    }
    return EvalReport(
        metrics=metrics, importance={}, provenance={b: 0.0 for b in BLOCKS},
        selected=names, n_folds=plan.n_folds, fold_counts=tuple(counts),
    )
