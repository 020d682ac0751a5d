"""Command-line entry points.

Subcommands:
    cdfx run     -c config.toml          full pipeline into the output dir
    cdfx mi      -c config.toml          MI matrix stage only -> mi.json
    cdfx embed   --graph g.json --mi mi.json --out assign.json --seed 7
    cdfx encode  -c config.toml --sample N --dump-terms terms.json
    cdfx extract -c config.toml          feature extraction (reuses cached
                                         mi.json / assign.json if present)

A global --seed overrides every seed in the config (GA, folds, sampling).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import config as cfg_mod
from . import dataset as ds_mod
from . import infometrics as im
from . import pipeline
from . import topology as topo
from .encode import Schedule, encode_hamiltonian, trotter_sequence


def _load(args) -> cfg_mod.RunConfig:
    return cfg_mod.validate(args.config, seed_override=args.seed)


def _fit_context(cfg: cfg_mod.RunConfig):
    """Shared front of the pipeline: dataset, train rows, selected columns."""
    ds = ds_mod.load_csv(cfg.dataset_path, cfg.label_column, cfg.delimiter)
    plan = ds_mod.make_folds(ds, cfg.n_splits, cfg.n_repeats, cfg.fold_seed)
    train_rows = plan.train_rows(cfg.fit_repeat, cfg.fit_split)
    n = cfg.n_qubits if cfg.n_qubits is not None else ds.n_features
    bins = cfg.bins if cfg.bins is not None else im.default_bins(len(train_rows))
    if n < ds.n_features:
        selected = im.select_features(ds, train_rows, n, bins)
    else:
        selected = list(range(ds.n_features))
    sub = ds_mod.Dataset(
        names=tuple(ds.names[j] for j in selected),
        X=ds.X[:, selected], y=ds.y,
    )
    return ds, sub, train_rows, n, bins


def cmd_run(args) -> int:
    cfg = _load(args)
    out = pipeline.run(cfg, reuse_cached=not args.no_cache)
    print(f"artifacts written to {out}")
    return 0


def cmd_mi(args) -> int:
    cfg = _load(args)
    _, sub, train_rows, _, bins = _fit_context(cfg)
    M = im.mi_matrix(sub, train_rows, bins)
    out = args.out or os.path.join(cfg.output_dir, "mi.json")
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    with open(out, "w") as fh:
        fh.write(M.to_json())
    print(f"wrote {out} ({M.n} features, {bins} bins)")
    return 0


def cmd_embed(args) -> int:
    g = topo.load_graph(args.graph)
    with open(args.mi) as fh:
        M = im.MIMatrix.from_json(fh.read())
    ga = topo.GAConfig(seed=args.seed)
    pi, best_f, history = topo.ga_optimize(g, M, ga)
    with open(args.out, "w") as fh:
        fh.write(pi.to_json(fitness=best_f, history=history))
    print(f"wrote {args.out} (fitness {best_f:.6f})")
    return 0


def cmd_encode(args) -> int:
    cfg = _load(args)
    ds, sub, train_rows, n, bins = _fit_context(cfg)
    if not 0 <= args.sample < ds.n_samples:
        raise SystemExit(f"sample index out of range (0..{ds.n_samples - 1})")
    scaler = ds_mod.fit_scaler(sub, train_rows)
    M = im.mi_matrix(sub, train_rows, bins)
    g = pipeline.build_graph(cfg, n)
    pi, _, _ = topo.ga_optimize(g, M, cfg.ga)
    coeffs = pipeline.coeffs_for(g, pi, M, cfg.ks)
    x = ds_mod.apply_scaler(scaler, sub.X[args.sample])
    sched = Schedule(total_time=cfg.total_time, profile=cfg.profile,
                     n_steps=cfg.n_steps)
    dump = {}
    for K in cfg.ks:
        hz = encode_hamiltonian(x, g, coeffs, pi, K)
        seq = trotter_sequence(hz, sched, impulse=cfg.impulse)
        dump[f"k{K}"] = {
            "hamiltonian": json.loads(hz.to_json()),
            "sequence": [
                {"word": p.word, "coeff": p.coeff, "angle": angle}
                for p, angle in seq
            ],
        }
    text = json.dumps(dump, sort_keys=True, indent=1)
    if args.dump_terms:
        with open(args.dump_terms, "w") as fh:
            fh.write(text)
        print(f"wrote {args.dump_terms}")
    else:
        print(text)
    return 0


def cmd_extract(args) -> int:
    cfg = _load(args)
    out = pipeline.run(cfg, reuse_cached=True)
    print(f"features written to {os.path.join(out, 'features.csv')}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cdfx",
        description="Counterdiabatic quantum feature extraction pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_cfg(p):
        p.add_argument("-c", "--config", required=True, help="TOML config file")
        p.add_argument("--seed", type=int, default=None,
                       help="override every seed in the config")

    p = sub.add_parser("run", help="full pipeline")
    add_cfg(p)
    p.add_argument("--no-cache", action="store_true",
                   help="recompute even if cached stage artifacts exist")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("mi", help="mutual-information matrix stage")
    add_cfg(p)
    p.add_argument("--out", default=None, help="output path (default: <outdir>/mi.json)")
    p.set_defaults(func=cmd_mi)

    p = sub.add_parser("embed", help="GA variable-to-qubit assignment")
    p.add_argument("--graph", required=True, help="hardware graph JSON")
    p.add_argument("--mi", required=True, help="MI matrix JSON")
    p.add_argument("--out", required=True, help="assignment output JSON")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("encode", help="dump encoding terms for one sample")
    add_cfg(p)
    p.add_argument("--sample", type=int, default=0)
    p.add_argument("--dump-terms", default=None, help="write term dump here")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("extract", help="feature extraction (cached stages reused)")
    add_cfg(p)
    p.set_defaults(func=cmd_extract)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (cfg_mod.ConfigError, ds_mod.DatasetError, im.InfoError,
            topo.TopologyError, pipeline.PipelineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
