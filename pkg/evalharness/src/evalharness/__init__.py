"""Evaluation harness for combined classical/quantum feature tables.

Consumes the extraction pipeline's file artifacts (combined.csv,
foldplan.json, manifest.json) and reproduces a fixed cross-validation
protocol: gradient boosting, repeated stratified folds taken verbatim from
the fold plan, SHAP-based importance attribution, and PCA/UMAP baselines.
"""
from .tables import FeatureTable, FoldPlan, HarnessError, block_of
from .treeshap import shap_values, expected_value
from .harness import (
    EvalReport, ModelConfig, baseline_compare, evaluate, shap_select,
)

__version__ = "0.1.0"

__all__ = [
    "EvalReport", "FeatureTable", "FoldPlan", "HarnessError", "ModelConfig",
    "baseline_compare", "block_of", "evaluate", "expected_value",
    "shap_select", "shap_values", "__version__",
]
