import json

import numpy as np
import pytest
from sklearn.model_selection import StratifiedKFold

from evalharness.tables import FeatureTable, FoldPlan


def make_plan(y, n_splits=5, n_repeats=1, seed=42) -> FoldPlan:
    """Build a stratified plan the same way the extractor exports one."""
    assignments = []
    for r in range(n_repeats):
        skf = StratifiedKFold(n_splits=n_splits, shuffle=True,
                              random_state=seed + r)
        rep = [tuple(sorted(int(i) for i in test))
               for _, test in skf.split(np.zeros_like(y), y)]
        assignments.append(tuple(rep))
    return FoldPlan(n_splits=n_splits, n_repeats=n_repeats,
                    assignments=tuple(assignments))


def plan_to_file(plan: FoldPlan, path, seed=42) -> None:
    payload = {
        "n_splits": plan.n_splits,
        "n_repeats": plan.n_repeats,
        "seed": seed,
        "assignments": [[list(s) for s in rep] for rep in plan.assignments],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, separators=(",", ":"), sort_keys=True)


def table_to_csv(table: FeatureTable, path) -> None:
    import csv
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(table.names) + ["label"])
        for i in range(table.n_samples):
            w.writerow([repr(float(v)) for v in table.X[i]]
                       + [int(table.y[i])])


@pytest.fixture
def simple_table():
    rng = np.random.default_rng(0)
    X = rng.uniform(-1, 1, size=(120, 6))
    y = (X[:, 0] + 0.5 * X[:, 1] > 0).astype(int)
    names = ("c_a", "c_b", "c_c", "q1_0_k2", "q2_0_1_k2", "q3_0_1_2_k3")
    return FeatureTable(names=names, X=X, y=y)


@pytest.fixture
def simple_plan(simple_table):
    return make_plan(simple_table.y, n_splits=3, n_repeats=1)
