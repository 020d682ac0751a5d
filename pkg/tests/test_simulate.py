import numpy as np
import pytest
from scipy.linalg import expm

from cdfx.simulate import (
    SimulationError, Statevector, apply_pauli_rotation, basis_state,
    pauli_apply, plus_state, run_sequence, sample,
)
from _oracles import dense_word


class TestPlusState:
    def test_n1(self):
        s = plus_state(1)
        assert np.allclose(s.amplitudes, [1 / np.sqrt(2)] * 2)

    def test_n2(self):
        s = plus_state(2)
        assert np.allclose(s.amplitudes, [0.5] * 4)

    def test_z_expectations_vanish(self):
        s = plus_state(3)
        for i in range(3):
            mask = 1 << i
            signs = 1 - 2 * ((np.arange(8) >> i) & 1)
            assert np.sum(np.abs(s.amplitudes) ** 2 * signs) == pytest.approx(0.0)

    def test_memory_budget(self):
        with pytest.raises(SimulationError, match="budget"):
            plus_state(30, max_qubits=24)

    def test_invalid_n(self):
        with pytest.raises(SimulationError):
            plus_state(0)


class TestPauliApply:
    def test_matches_dense_random_words(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            word = "".join(rng.choice(list("IXYZ"), size=n))
            amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
            amps /= np.linalg.norm(amps)
            state = Statevector(n, amps.copy())
            got = pauli_apply(state, word)
            ref = dense_word(word) @ amps
            assert np.max(np.abs(got - ref)) < 1e-12

    def test_word_length_mismatch(self):
        with pytest.raises(SimulationError):
            pauli_apply(plus_state(2), "X")


class TestRotation:
    def test_zero_angle_bit_exact(self):
        s = plus_state(3)
        before = s.amplitudes.copy()
        apply_pauli_rotation(s, "XYZ", 0.0)
        assert np.array_equal(s.amplitudes, before)

    def test_z_on_plus_kills_x_expectation(self):
        # exp(-i pi/4 Z)|+> has <X> = cos(pi/2) = 0
        s = plus_state(1)
        apply_pauli_rotation(s, "Z", np.pi / 4)
        x_val = np.vdot(s.amplitudes, dense_word("X") @ s.amplitudes).real
        assert x_val == pytest.approx(0.0, abs=1e-12)

    def test_inverse_restores_state(self):
        rng = np.random.default_rng(1)
        s = plus_state(4)
        apply_pauli_rotation(s, "XZYI", 0.7)
        before = s.amplitudes.copy()
        apply_pauli_rotation(s, "ZYXZ", 1.1)
        apply_pauli_rotation(s, "ZYXZ", -1.1)
        assert np.max(np.abs(s.amplitudes - before)) < 1e-12

    def test_matches_dense_exponential(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            n = int(rng.integers(1, 6))
            word = "".join(rng.choice(list("IXYZ"), size=n))
            theta = float(rng.uniform(-2, 2))
            s = plus_state(n)
            apply_pauli_rotation(s, word, theta)
            ref = expm(-1j * theta * dense_word(word)) @ plus_state(n).amplitudes
            assert np.max(np.abs(s.amplitudes - ref)) < 1e-12

    def test_norm_preserved(self):
        rng = np.random.default_rng(3)
        s = plus_state(5)
        for _ in range(100):
            word = "".join(rng.choice(list("IXYZ"), size=5))
            apply_pauli_rotation(s, word, float(rng.uniform(-3, 3)))
            assert abs(1.0 - s.norm()) < 1e-12


class TestRunSequence:
    def test_empty_sequence_identity(self):
        s = plus_state(3)
        before = s.amplitudes.copy()
        run_sequence(s, [])
        assert np.array_equal(s.amplitudes, before)

    def test_matches_dense_product(self):
        rng = np.random.default_rng(4)
        n = 5
        seq = []
        for _ in range(12):
            word = "".join(rng.choice(list("IXYZ"), size=n))
            seq.append((word, float(rng.uniform(-1, 1))))
        s = run_sequence(plus_state(n), seq)
        U = np.eye(1 << n, dtype=complex)
        for word, angle in seq:
            U = expm(-1j * angle * dense_word(word)) @ U
        ref = U @ plus_state(n).amplitudes
        fid = abs(np.vdot(ref, s.amplitudes)) ** 2
        assert fid >= 1 - 1e-10

    def test_reversed_negated_inverts(self):
        rng = np.random.default_rng(5)
        seq = [("XZY", 0.4), ("ZZI", -0.9), ("YIX", 1.3)]
        s = plus_state(3)
        run_sequence(s, seq)
        run_sequence(s, [(w, -a) for w, a in reversed(seq)])
        assert np.max(np.abs(s.amplitudes - plus_state(3).amplitudes)) < 1e-12

    def test_commuting_words_order_independent(self):
        # reordering commuting rotations only reorders complex multiplies,
        # which is not associative in IEEE float; equality holds to ~1 ulp
        seq_a = [("ZZI", 0.3), ("IZZ", 0.8), ("ZIZ", -0.2)]
        seq_b = list(reversed(seq_a))
        sa = run_sequence(plus_state(3), seq_a)
        sb = run_sequence(plus_state(3), seq_b)
        assert np.max(np.abs(sa.amplitudes - sb.amplitudes)) < 1e-15


class TestSample:
    def test_basis_state_all_shots(self):
        s = basis_state("00")
        table = sample(s, 1000, seed=0)
        assert table.counts == {"00": 1000}

    def test_plus_state_binomial_bound(self):
        s = plus_state(1)
        shots = 100_000
        table = sample(s, shots, seed=1)
        sigma = np.sqrt(shots * 0.25)
        for bits in ("0", "1"):
            assert abs(table.counts.get(bits, 0) - shots / 2) < 5 * sigma

    def test_deterministic_per_seed(self):
        s = plus_state(3)
        assert sample(s, 5000, seed=7).to_json() == sample(s, 5000, seed=7).to_json()

    def test_counts_sum_to_shots(self):
        s = plus_state(4)
        table = sample(s, 12345, seed=2)
        assert sum(table.counts.values()) == 12345

    def test_invalid_shots(self):
        with pytest.raises(SimulationError):
            sample(plus_state(1), 0, seed=0)


def test_statevector_dump_round_trip(tmp_path):
    rng = np.random.default_rng(6)
    s = plus_state(3)
    apply_pauli_rotation(s, "XYZ", 0.3)
    p = tmp_path / "state.bin"
    s.dump(p)
    again = Statevector.load(p)
    assert again.n_qubits == 3
    assert np.array_equal(again.amplitudes, s.amplitudes)
