"""`cdfx-eval`: evaluate a combined feature table against its fold plan."""
from __future__ import annotations

import argparse
import json
import os
import sys

from .harness import ModelConfig, baseline_compare, evaluate, shap_select
from .tables import FeatureTable, FoldPlan, HarnessError, check_against_manifest


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cdfx-eval",
        description="Cross-validated gradient-boosting evaluation of a "
                    "combined classical/quantum feature table.",
    )
    p.add_argument("--features", required=True,
                   help="combined.csv from the extraction pipeline")
    p.add_argument("--folds", required=True,
                   help="foldplan.json from the extraction pipeline")
    p.add_argument("--manifest", default=None,
                   help="optional manifest.json for a schema check")
    p.add_argument("--out", default="evalout", help="output directory")
    p.add_argument("--estimators", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--top-k", type=int, default=None,
                   help="additionally retrain on the top-k SHAP features")
    p.add_argument("--baseline", choices=("pca", "umap"), default=None)
    p.add_argument("--components", type=int, default=10,
                   help="components for the --baseline reducer")
    p.add_argument("--no-plots", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        table = FeatureTable.load(args.features)
        plan = FoldPlan.load(args.folds)
        if args.manifest:
            check_against_manifest(table, args.manifest)
        cfg = ModelConfig(n_estimators=args.estimators, seed=args.seed)

        report = evaluate(table, plan, cfg)
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "report.json"), "w") as fh:
            fh.write(report.to_json())

        if args.top_k is not None:
            keep, sub_report = shap_select(table, plan, args.top_k, cfg)
            payload = json.loads(sub_report.to_json())
            payload["kept_features"] = keep
            with open(os.path.join(args.out,
                                   f"report_top{args.top_k}.json"), "w") as fh:
                json.dump(payload, fh, sort_keys=True, indent=1)

        if args.baseline:
            base = baseline_compare(
                table, plan, args.baseline, args.components, cfg)
            with open(os.path.join(args.out,
                                   f"report_{args.baseline}.json"), "w") as fh:
                fh.write(base.to_json())

        if not args.no_plots:
            from .plots import write_plots
            write_plots(report, args.out)

        auc = report.metrics["auc"]
        print(f"auc {auc['mean']:.4f} +/- {auc['std']:.4f} over "
              f"{report.n_folds} folds; report in {args.out}")
        return 0
    except (HarnessError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
