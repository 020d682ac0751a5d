import numpy as np
import pytest
from sklearn.base import clone
from sklearn.ensemble import GradientBoostingClassifier
from sklearn.pipeline import Pipeline

from cdfx.estimator import QuantumFeatureExtractor


def make_data(n=40, d=6, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1, 1, size=(n, d))
    y = (X[:, 0] > 0).astype(int)
    return X, y


def fast_extractor(**kw):
    defaults = dict(ga_generations=5, ga_population=10, seed=0)
    defaults.update(kw)
    return QuantumFeatureExtractor(**defaults)


def test_get_params_round_trip():
    est = fast_extractor(n_qubits=4, ks=(2, 3))
    params = est.get_params()
    assert params["n_qubits"] == 4
    est2 = clone(est)
    assert est2.get_params() == params


def test_fit_transform_shape():
    X, y = make_data()
    est = fast_extractor()
    Z = est.fit_transform(X, y)
    assert Z.shape == (40, 3 * 6)
    assert np.all(Z >= -1) and np.all(Z <= 1)


def test_feature_selection_with_budget():
    X, y = make_data(d=10)
    est = fast_extractor(n_qubits=4)
    Z = est.fit_transform(X, y)
    assert Z.shape == (40, 12)
    assert len(est.selected_) == 4


def test_selection_requires_labels():
    X, y = make_data(d=10)
    est = fast_extractor(n_qubits=4)
    with pytest.raises(ValueError, match="needs y"):
        est.fit(X)


def test_transform_deterministic():
    X, y = make_data()
    est = fast_extractor()
    est.fit(X, y)
    assert np.array_equal(est.transform(X), est.transform(X))


def test_feature_names_out():
    X, y = make_data()
    est = fast_extractor(ks=(2, 3))
    est.fit(X, y)
    names = est.get_feature_names_out()
    assert len(names) == 18
    assert names[0] == "q1_0_k2"
    assert names[-1].startswith("q3_") and names[-1].endswith("_k3")


def test_composes_in_sklearn_pipeline():
    X, y = make_data(n=60)
    pipe = Pipeline([
        ("qfe", fast_extractor()),
        ("clf", GradientBoostingClassifier(n_estimators=20, random_state=0)),
    ])
    pipe.fit(X, y)
    assert pipe.score(X, y) > 0.6


def test_dual_dynamics_routes_triples():
    X, y = make_data()
    est = fast_extractor(ks=(2, 3))
    est.fit(X, y)
    names = est.get_feature_names_out()
    tags = {n.rsplit("_", 1)[1] for n in names}
    assert tags == {"k2", "k3"}


def test_too_many_qubits_rejected():
    X, y = make_data(d=4)
    est = fast_extractor(n_qubits=9)
    with pytest.raises(ValueError, match="exceeds"):
        est.fit(X, y)
