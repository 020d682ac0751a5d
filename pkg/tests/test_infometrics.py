import numpy as np
import pytest

from cdfx.dataset import Dataset
from cdfx.infometrics import (
    HyperCoeffs, InfoError, MIMatrix, hyper_coeff, mi_matrix, mutual_info,
    normalized_mi, select_features,
)


def make_ds(X, y=None):
    X = np.asarray(X, dtype=np.float64)
    if y is None:
        y = np.array([0, 1] * (X.shape[0] // 2) + [0] * (X.shape[0] % 2))
    return Dataset(
        names=tuple(f"f{i}" for i in range(X.shape[1])),
        X=X, y=np.asarray(y, dtype=np.int64),
    )


class TestMutualInfo:
    def test_identical_columns_full_entropy(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=10_000)
        # equal-frequency binning makes H(a) = log(bins)
        assert mutual_info(a, a, bins=8) == pytest.approx(np.log(8), rel=0.05)

    def test_independent_uniforms_near_zero(self):
        rng = np.random.default_rng(1)
        a = rng.uniform(size=10_000)
        b = rng.uniform(size=10_000)
        assert mutual_info(a, b, bins=8) < 0.02

    def test_constant_column_zero(self):
        rng = np.random.default_rng(2)
        a = np.full(100, 3.0)
        b = rng.normal(size=100)
        assert mutual_info(a, b, bins=8) == 0.0

    def test_symmetry_bit_exact(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=500)
        b = a + rng.normal(size=500) * 0.5
        assert mutual_info(a, b, 8) == mutual_info(b, a, 8)

    def test_length_mismatch(self):
        with pytest.raises(InfoError):
            mutual_info(np.zeros(5), np.zeros(6), 2)

    def test_bins_exceed_samples(self):
        with pytest.raises(InfoError):
            mutual_info(np.arange(4.0), np.arange(4.0), bins=5)

    def test_nonnegative(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            a = rng.normal(size=50)
            b = rng.normal(size=50)
            assert mutual_info(a, b, 4) >= 0.0


class TestNormalizedMI:
    def test_identical_is_one(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=2000)
        assert normalized_mi(a, a, 8) == pytest.approx(1.0, abs=1e-9)

    def test_independent_small(self):
        rng = np.random.default_rng(6)
        a = rng.uniform(size=10_000)
        b = rng.uniform(size=10_000)
        assert normalized_mi(a, b, 8) < 0.01

    def test_constant_convention(self):
        a = np.full(100, 1.0)
        b = np.arange(100.0)
        assert normalized_mi(a, b, 8) == 0.0

    def test_range(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            a = rng.normal(size=200)
            b = a * (rng.random() > 0.5) + rng.normal(size=200)
            v = normalized_mi(a, b, 8)
            assert 0.0 <= v <= 1.0

    def test_shuffle_does_not_gain_information(self):
        # destroying the pairing cannot raise dependency beyond noise
        rng = np.random.default_rng(8)
        a = rng.normal(size=10_000)
        b = a + rng.normal(size=10_000) * 0.3
        c = rng.permutation(b)
        assert normalized_mi(a, c, 8) <= normalized_mi(a, b, 8) + 0.05


class TestMIMatrix:
    def test_duplicate_feature_pair(self):
        rng = np.random.default_rng(9)
        col = rng.normal(size=400)
        X = np.column_stack([col, rng.normal(size=400), col])
        M = mi_matrix(make_ds(X), rows=np.arange(400), bins=8)
        assert M.values[0, 2] == pytest.approx(1.0, abs=1e-9)

    def test_matches_per_pair_calls(self):
        rng = np.random.default_rng(10)
        X = rng.normal(size=(300, 4))
        X[:, 1] += X[:, 0]
        M = mi_matrix(make_ds(X), rows=np.arange(300), bins=6)
        for a in range(4):
            for b in range(4):
                if a == b:
                    assert M.values[a, a] == 1.0
                else:
                    assert M.values[a, b] == pytest.approx(
                        normalized_mi(X[:, a], X[:, b], 6), abs=1e-12)

    def test_symmetric(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(200, 5))
        M = mi_matrix(make_ds(X), rows=np.arange(200), bins=4)
        assert np.array_equal(M.values, M.values.T)

    def test_train_rows_only(self):
        rng = np.random.default_rng(12)
        X = rng.normal(size=(100, 3))
        ds1 = make_ds(X)
        X2 = X.copy()
        X2[80:] = 1e6  # corrupt held-out rows
        ds2 = make_ds(X2)
        rows = np.arange(80)
        assert mi_matrix(ds1, rows, 6).to_json() == mi_matrix(ds2, rows, 6).to_json()

    def test_json_round_trip(self):
        rng = np.random.default_rng(13)
        X = rng.normal(size=(50, 3))
        M = mi_matrix(make_ds(X), np.arange(50), 4)
        again = MIMatrix.from_json(M.to_json())
        assert np.array_equal(again.values, M.values)
        assert again.bins == M.bins


class TestHyperCoeff:
    def mat(self, entries, n=4):
        v = np.eye(n)
        for (a, b), val in entries.items():
            v[a, b] = v[b, a] = val
        return MIMatrix(values=v, bins=4)

    def test_pair_reduces_to_entry(self):
        M = self.mat({(0, 1): 0.37})
        assert hyper_coeff({0, 1}, M) == 0.37

    def test_triple_is_mean(self):
        M = self.mat({(0, 1): 0.2, (0, 2): 0.4, (1, 2): 0.6})
        assert hyper_coeff({0, 1, 2}, M) == pytest.approx(0.4)

    def test_permutation_invariant(self):
        M = self.mat({(0, 1): 0.2, (0, 2): 0.4, (1, 2): 0.6})
        assert hyper_coeff((2, 0, 1), M) == hyper_coeff((0, 1, 2), M)

    def test_monotone_in_entries(self):
        lo = self.mat({(0, 1): 0.2, (0, 2): 0.4, (1, 2): 0.6})
        hi = self.mat({(0, 1): 0.3, (0, 2): 0.4, (1, 2): 0.6})
        assert hyper_coeff({0, 1, 2}, hi) > hyper_coeff({0, 1, 2}, lo)

    def test_too_small_subset(self):
        M = self.mat({})
        with pytest.raises(InfoError):
            hyper_coeff({1}, M)

    def test_from_mi_lookup(self):
        M = self.mat({(0, 1): 0.5, (1, 2): 0.25, (0, 2): 0.75})
        hc = HyperCoeffs.from_mi(M, [(0, 1), (1, 2)], order=2)
        assert hc[(1, 0)] == 0.5
        with pytest.raises(InfoError):
            hc[(2, 3)]


class TestSelectFeatures:
    def test_label_equal_feature_ranks_first(self):
        rng = np.random.default_rng(14)
        y = (rng.random(400) > 0.5).astype(int)
        X = rng.normal(size=(400, 5))
        X[:, 3] = y
        ds = make_ds(X, y=y)
        picked = select_features(ds, np.arange(400), 3, bins=8)
        assert picked[0] == 3

    def test_202_to_156(self):
        rng = np.random.default_rng(15)
        y = (rng.random(300) > 0.5).astype(int)
        X = rng.normal(size=(300, 202))
        ds = make_ds(X, y=y)
        picked = select_features(ds, np.arange(300), 156, bins=8)
        assert len(picked) == 156
        assert len(set(picked)) == 156

    def test_train_only_dependence(self):
        rng = np.random.default_rng(16)
        y = (rng.random(100) > 0.5).astype(int)
        X = rng.normal(size=(100, 6))
        ds1 = make_ds(X, y=y)
        X2 = X.copy()
        X2[80:] = -99.0
        ds2 = make_ds(X2, y=y)
        rows = np.arange(80)
        assert select_features(ds1, rows, 4, 8) == select_features(ds2, rows, 4, 8)

    def test_bad_target_count(self):
        ds = make_ds(np.random.default_rng(0).normal(size=(10, 3)))
        with pytest.raises(InfoError):
            select_features(ds, np.arange(10), 0, 2)
        with pytest.raises(InfoError):
            select_features(ds, np.arange(10), 4, 2)
