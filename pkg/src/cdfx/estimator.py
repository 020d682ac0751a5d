"""Scikit-learn style transformer wrapping the quantum feature extraction.

fit() learns the per-column scaler, the MI structure, and the GA qubit
assignment from training data; transform() maps samples to 1-/2-/3-body
Z-expectation features. Composes with sklearn pipelines and model selection
via the standard get_params/set_params contract.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from . import dataset as ds_mod
from . import infometrics as im
from . import topology as topo
from .encode import Schedule, encode_hamiltonian, trotter_sequence
from .extract import ObservableSet, feature_map, plan_for
from .simulate import plus_state, run_sequence, sample


class QuantumFeatureExtractor(TransformerMixin, BaseEstimator):
    """Counterdiabatic quantum feature map over a hardware connectivity ring.

    Parameters
    ----------
    n_qubits : int or None
        Qubit budget. None uses one qubit per input feature. When smaller
        than the feature count, the top features by MI with the label are
        selected at fit time (requires y).
    ks : sequence of int
        Interaction orders of the dynamics to run: (2,) or (2, 3).
    bins : int or None
        Histogram bins for the MI estimator; None picks
        min(16, sqrt(n_samples)).
    total_time, profile, n_steps, impulse
        Evolution schedule; impulse mode runs the single-step CD circuit.
    mode : "exact" or "shots"
        Expectation values from the exact state or from sampled counts.
    ga_generations, ga_population
        Genetic-algorithm budget for the variable-to-qubit assignment.
    seed : int
        Seed for the GA and for shot sampling.
    """

    def __init__(self, n_qubits=None, ks=(2,), bins=None, total_time=1.0,
                 profile="sin2", n_steps=1, impulse=True, mode="exact",
                 shots=8192, ga_generations=100, ga_population=100,
                 lambda2=1.0, lambda3=1.0, seed=0):
        self.n_qubits = n_qubits
        self.ks = ks
        self.bins = bins
        self.total_time = total_time
        self.profile = profile
        self.n_steps = n_steps
        self.impulse = impulse
        self.mode = mode
        self.shots = shots
        self.ga_generations = ga_generations
        self.ga_population = ga_population
        self.lambda2 = lambda2
        self.lambda3 = lambda3
        self.seed = seed

    def fit(self, X, y=None):
        if y is not None:
            X, y = check_X_y(X, y)
            y = np.asarray(y)
        else:
            X = check_array(X)
        n_features = X.shape[1]
        n = self.n_qubits if self.n_qubits is not None else n_features
        if n > n_features:
            raise ValueError(
                f"n_qubits={n} exceeds the {n_features} input features")
        if n < 3:
            raise ValueError("need at least 3 qubits for ring observables")

        names = tuple(f"f{j}" for j in range(n_features))
        bins = self.bins if self.bins is not None else im.default_bins(X.shape[0])
        rows = np.arange(X.shape[0])
        if n < n_features:
            if y is None:
                raise ValueError("feature selection needs y; pass labels to fit")
            ds = ds_mod.Dataset(names=names, X=np.asarray(X, dtype=np.float64),
                                y=np.asarray(y, dtype=np.int64))
            self.selected_ = im.select_features(ds, rows, n, bins)
        else:
            self.selected_ = list(range(n_features))

        sub_X = np.asarray(X, dtype=np.float64)[:, self.selected_]
        sub = ds_mod.Dataset(
            names=tuple(names[j] for j in self.selected_),
            X=sub_X, y=np.zeros(X.shape[0], dtype=np.int64),
        )
        self.scaler_ = ds_mod.fit_scaler(sub, rows)
        self.mi_ = im.mi_matrix(sub, rows, bins)
        self.graph_ = topo.ring(n)
        cfg = topo.GAConfig(
            population_size=self.ga_population,
            n_generations=self.ga_generations,
            lambda2=self.lambda2,
            lambda3=self.lambda3 if 3 in set(self.ks) else 0.0,
            seed=self.seed,
        )
        self.assignment_, self.fitness_, self.history_ = topo.ga_optimize(
            self.graph_, self.mi_, cfg)
        self.coeffs_ = {}
        pi = self.assignment_
        pair_subsets = [(pi[i], pi[j]) for i, j in self.graph_.sorted_edges()]
        self.coeffs_[2] = im.HyperCoeffs.from_mi(self.mi_, pair_subsets, order=2)
        if 3 in set(self.ks):
            trips = sorted(topo.enumerate_triplets(self.graph_))
            trip_subsets = [(pi[i], pi[j], pi[k]) for i, j, k in trips]
            self.coeffs_[3] = im.HyperCoeffs.from_mi(self.mi_, trip_subsets, order=3)
        self.n_qubits_ = n
        self.n_features_in_ = n_features
        self.observables_ = ObservableSet(n=n)
        self.plan_ = plan_for(list(self.ks))
        return self

    def transform(self, X):
        check_is_fitted(self, "assignment_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} features, got {X.shape[1]}")
        sched = Schedule(total_time=self.total_time, profile=self.profile,
                         n_steps=self.n_steps)
        scaled = ds_mod.apply_scaler(self.scaler_, X[:, self.selected_])
        out = np.empty((X.shape[0], 3 * self.n_qubits_))
        for i in range(X.shape[0]):
            states = {}
            for K in sorted(set(self.ks)):
                hz = encode_hamiltonian(
                    scaled[i], self.graph_, self.coeffs_, self.assignment_, K)
                seq = trotter_sequence(hz, sched, impulse=self.impulse)
                state = run_sequence(plus_state(self.n_qubits_), seq)
                if self.mode == "shots":
                    state = sample(state, self.shots, self.seed + 1000 * i + K)
                states[f"k{K}"] = state
            rec = feature_map(states, self.observables_, self.plan_, sample_id=i)
            out[i] = rec.values
            if i == 0:
                self.feature_names_out_ = rec.names
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "assignment_")
        obs = self.observables_
        names = []
        for order, supports in ((1, obs.single_supports()),
                                (2, obs.pair_supports()),
                                (3, obs.triple_supports())):
            tag = self.plan_[order]
            for s in supports:
                names.append(f"q{order}_" + "_".join(map(str, s)) + f"_{tag}")
        return np.asarray(names, dtype=object)
