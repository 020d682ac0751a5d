"""cdfx: counterdiabatic quantum feature extraction for tabular data."""

from .dataset import Dataset, FoldPlan, ScalingSpec, apply_scaler, fit_scaler, load_csv, make_folds
from .encode import PauliTerm, Schedule, ZPolynomial, alpha, cd_terms, encode_hamiltonian, trotter_sequence
from .estimator import QuantumFeatureExtractor
from .extract import FeatureRecord, ObservableSet, concat_features, expect_z, feature_map
from .infometrics import HyperCoeffs, MIMatrix, hyper_coeff, mi_matrix, mutual_info, normalized_mi, select_features
from .simulate import ShotTable, Statevector, apply_pauli_rotation, plus_state, run_sequence, sample
from .topology import Assignment, GAConfig, HardwareGraph, enumerate_triplets, fitness, ga_optimize, heavy_hex_patch, ring

__version__ = "0.1.0"

__all__ = [
    "Dataset", "FoldPlan", "ScalingSpec", "apply_scaler", "fit_scaler",
    "load_csv", "make_folds",
    "PauliTerm", "Schedule", "ZPolynomial", "alpha", "cd_terms",
    "encode_hamiltonian", "trotter_sequence",
    "QuantumFeatureExtractor",
    "FeatureRecord", "ObservableSet", "concat_features", "expect_z",
    "feature_map",
    "HyperCoeffs", "MIMatrix", "hyper_coeff", "mi_matrix", "mutual_info",
    "normalized_mi", "select_features",
    "ShotTable", "Statevector", "apply_pauli_rotation", "plus_state",
    "run_sequence", "sample",
    "Assignment", "GAConfig", "HardwareGraph", "enumerate_triplets",
    "fitness", "ga_optimize", "heavy_hex_patch", "ring",
    "__version__",
]
