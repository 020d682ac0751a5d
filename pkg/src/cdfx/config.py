"""TOML run configuration: parsing, defaults, and validation.

Unknown keys are rejected so typos fail loudly. A minimal config needs only
the dataset path and label column; everything else has documented defaults
(K=[2], ring graph sized to the qubit budget, impulse mode, exact
extraction).
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .topology import GAConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    dataset_path: str
    label_column: str
    delimiter: str = ","
    n_qubits: int | None = None  # None: one qubit per feature
    bins: int | None = None      # None: min(16, sqrt(train rows))
    ks: tuple[int, ...] = (2,)
    graph_kind: str = "ring"     # ring | heavy_hex | file
    graph_rows: int = 2
    graph_cols: int = 4
    graph_path: str | None = None
    ga: GAConfig = field(default_factory=GAConfig)
    total_time: float = 1.0
    profile: str = "sin2"
    n_steps: int = 1
    impulse: bool = True
    extraction_mode: str = "exact"  # exact | shots
    shots: int = 8192
    extraction_seed: int = 7
    n_splits: int = 5
    n_repeats: int = 5
    fold_seed: int = 42
    fit_repeat: int = 0
    fit_split: int = 0
    output_dir: str = "out"

    def canonical(self) -> dict:
        d = {
            k: (list(v) if isinstance(v, tuple) else v)
            for k, v in self.__dict__.items() if k != "ga"
        }
        d["ga"] = self.ga.to_dict()
        return d

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


_SCHEMA = {
    "dataset": {"path", "label", "delimiter"},
    "features": {"n_qubits", "bins", "plans"},
    "graph": {"kind", "rows", "cols", "path"},
    "ga": {"population_size", "n_generations", "tournament_size",
           "crossover_rate", "mutation_rate", "elitism_count", "seed",
           "lambda2", "lambda3"},
    "schedule": {"total_time", "profile", "n_steps", "impulse"},
    "extraction": {"mode", "shots", "seed"},
    "folds": {"n_splits", "n_repeats", "seed", "fit_repeat", "fit_split"},
    "output": {"dir"},
}


def _check_keys(obj: dict, allowed, where: str) -> None:
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{where}]: {sorted(unknown)}")


def validate(path, seed_override: int | None = None) -> RunConfig:
    """Parse and validate a TOML config file into a RunConfig.

    `seed_override` replaces every seed in the config (GA, folds,
    extraction) with the given value.
    """
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"no such config file: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed TOML: {exc}") from None

    _check_keys(raw, _SCHEMA, "top level")
    for section, keys in _SCHEMA.items():
        if section in raw:
            if not isinstance(raw[section], dict):
                raise ConfigError(f"[{section}] must be a table")
            _check_keys(raw[section], keys, section)

    ds = raw.get("dataset", {})
    if "path" not in ds or "label" not in ds:
        raise ConfigError("[dataset] must set 'path' and 'label'")

    feats = raw.get("features", {})
    ks = tuple(sorted(set(int(k) for k in feats.get("plans", [2]))))
    if not ks or not set(ks) <= {2, 3}:
        raise ConfigError(f"plans must be a non-empty subset of [2, 3], got {list(ks)}")
    if 2 not in ks:
        raise ConfigError("plans must include the order-2 dynamics")

    graph = raw.get("graph", {})
    kind = graph.get("kind", "ring")
    if kind not in ("ring", "heavy_hex", "file"):
        raise ConfigError(f"unknown graph kind {kind!r}")
    if kind == "file":
        gpath = graph.get("path")
        if not gpath:
            raise ConfigError("graph kind 'file' requires a path")
        base = os.path.dirname(os.path.abspath(path))
        gpath = gpath if os.path.isabs(gpath) else os.path.join(base, gpath)
        if not os.path.exists(gpath):
            raise ConfigError(f"graph file not found: {gpath}")
    else:
        gpath = None

    ga_raw = dict(raw.get("ga", {}))
    ga = GAConfig(**ga_raw)

    sched = raw.get("schedule", {})
    ext = raw.get("extraction", {})
    mode = ext.get("mode", "exact")
    if mode not in ("exact", "shots"):
        raise ConfigError(f"extraction mode must be 'exact' or 'shots', got {mode!r}")
    folds = raw.get("folds", {})

    base = os.path.dirname(os.path.abspath(path))
    ds_path = ds["path"]
    ds_path = ds_path if os.path.isabs(ds_path) else os.path.join(base, ds_path)
    if not os.path.exists(ds_path):
        raise ConfigError(f"dataset file not found: {ds_path}")
    out_dir = raw.get("output", {}).get("dir", "out")
    out_dir = out_dir if os.path.isabs(out_dir) else os.path.join(base, out_dir)

    cfg = RunConfig(
        dataset_path=ds_path,
        label_column=ds["label"],
        delimiter=ds.get("delimiter", ","),
        n_qubits=feats.get("n_qubits"),
        bins=feats.get("bins"),
        ks=ks,
        graph_kind=kind,
        graph_rows=graph.get("rows", 2),
        graph_cols=graph.get("cols", 4),
        graph_path=gpath,
        ga=ga,
        total_time=float(sched.get("total_time", 1.0)),
        profile=sched.get("profile", "sin2"),
        n_steps=int(sched.get("n_steps", 1)),
        impulse=bool(sched.get("impulse", True)),
        extraction_mode=mode,
        shots=int(ext.get("shots", 8192)),
        extraction_seed=int(ext.get("seed", 7)),
        n_splits=int(folds.get("n_splits", 5)),
        n_repeats=int(folds.get("n_repeats", 5)),
        fold_seed=int(folds.get("seed", 42)),
        fit_repeat=int(folds.get("fit_repeat", 0)),
        fit_split=int(folds.get("fit_split", 0)),
        output_dir=out_dir,
    )
    if seed_override is not None:
        cfg = RunConfig(**{
            **cfg.__dict__,
            "ga": GAConfig(**{**ga.to_dict(), "seed": seed_override}),
            "fold_seed": seed_override,
            "extraction_seed": seed_override,
        })
    if cfg.n_qubits is not None and cfg.n_qubits < 3:
        raise ConfigError("n_qubits must be >= 3 (ring observables need it)")
    if cfg.n_steps < 1:
        raise ConfigError("n_steps must be >= 1")
    return cfg
