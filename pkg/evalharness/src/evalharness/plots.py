"""Report figures: metric summary, top-feature importances, provenance."""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .harness import METRICS, EvalReport
from .tables import BLOCKS


def plot_metrics(report: EvalReport, path) -> None:
    means = [report.metrics[m]["mean"] for m in METRICS]
    stds = [report.metrics[m]["std"] for m in METRICS]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(METRICS, means, yerr=stds, capsize=4, color="#4878cf")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score (mean over folds)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_importance(report: EvalReport, path, top: int = 20) -> None:
    ranked = sorted(report.importance.items(), key=lambda kv: kv[1])[-top:]
    names = [nm for nm, _ in ranked]
    vals = [v for _, v in ranked]
    colors = {"classical": "#888888", "1-body": "#4878cf",
              "2-body": "#ee854a", "3-body": "#6acc64"}
    from .tables import block_of
    fig, ax = plt.subplots(figsize=(6, 0.28 * max(len(names), 6) + 1))
    ax.barh(names, vals, color=[colors[block_of(nm)] for nm in names])
    ax.set_xlabel("normalized mean |SHAP|")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_provenance(report: EvalReport, path) -> None:
    vals = [report.provenance.get(b, 0.0) for b in BLOCKS]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(BLOCKS, vals, color=["#888888", "#4878cf", "#ee854a", "#6acc64"])
    ax.set_ylabel("fraction of importance")
    ax.set_ylim(0, 1.0)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_plots(report: EvalReport, outdir) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    written = []
    jobs = [("metrics.png", plot_metrics)]
    if report.importance:
        jobs += [("importance.png", plot_importance),
                 ("provenance.png", plot_provenance)]
    for name, fn in jobs:
        path = os.path.join(outdir, name)
        fn(report, path)
        written.append(path)
    return written
