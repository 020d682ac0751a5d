import itertools
import json
from importlib import resources

import numpy as np
import pytest

from cdfx.infometrics import MIMatrix
from cdfx.topology import (
    Assignment, GAConfig, HardwareGraph, TopologyError, _order_crossover,
    enumerate_triplets, fitness, ga_optimize, heavy_hex_patch,
    identity_assignment, ring,
)
from _oracles import brute_force_triplets


class TestGraphs:
    def test_ring_basics(self):
        g = ring(6)
        assert g.n_qubits == 6
        assert len(g.edges) == 6
        assert all(g.degree(i) == 2 for i in range(6))

    def test_heavy_hex_degree_bound(self):
        g = heavy_hex_patch(1, 4)
        assert all(g.degree(i) <= 3 for i in range(g.n_qubits))
        g = heavy_hex_patch(3, 8)
        assert all(g.degree(i) <= 3 for i in range(g.n_qubits))

    def test_heavy_hex_156(self):
        g = heavy_hex_patch(8, 16)
        assert g.n_qubits == 156
        assert all(g.degree(i) <= 3 for i in range(g.n_qubits))

    def test_device_file_loads(self):
        text = resources.files("cdfx.data").joinpath("device_156.json").read_text()
        g = HardwareGraph.from_json(text)
        assert g.n_qubits == 156
        assert all(g.degree(i) <= 3 for i in range(g.n_qubits))

    def test_invalid_sizes(self):
        with pytest.raises(TopologyError):
            heavy_hex_patch(0, 3)
        with pytest.raises(TopologyError):
            ring(2)

    def test_no_self_loops(self):
        with pytest.raises(TopologyError):
            HardwareGraph.from_edges(3, [(1, 1)])

    def test_json_round_trip(self):
        g = heavy_hex_patch(2, 5)
        again = HardwareGraph.from_json(g.to_json())
        assert again == g


class TestTriplets:
    def test_path_graph(self):
        g = HardwareGraph.from_edges(3, [(0, 1), (1, 2)])
        assert enumerate_triplets(g) == {(0, 1, 2)}

    def test_ring4(self):
        g = ring(4)
        assert len(enumerate_triplets(g)) == 4

    def test_star(self):
        g = HardwareGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        assert len(enumerate_triplets(g)) == 3

    @pytest.mark.parametrize("n,p,seed", [(5, 0.5, 0), (8, 0.3, 1), (12, 0.25, 2)])
    def test_matches_brute_force(self, n, p, seed):
        rng = np.random.default_rng(seed)
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
        g = HardwareGraph.from_edges(n, edges)
        assert enumerate_triplets(g) == brute_force_triplets(n, edges)


def random_mi(rng, n):
    raw = rng.uniform(0, 1, size=(n, n))
    v = (raw + raw.T) / 2
    np.fill_diagonal(v, 1.0)
    return MIMatrix(values=v, bins=4)


class TestFitness:
    def test_single_edge(self):
        g = HardwareGraph.from_edges(2, [(0, 1)])
        v = np.array([[1.0, 0.7], [0.7, 1.0]])
        M = MIMatrix(values=v, bins=4)
        pi = identity_assignment(2)
        assert fitness(pi, g, M, lambda2=1.0, lambda3=0.0) == pytest.approx(0.7)

    def test_complete_graph_invariance(self):
        rng = np.random.default_rng(3)
        n = 5
        g = HardwareGraph.from_edges(n, itertools.combinations(range(n), 2))
        M = random_mi(rng, n)
        base = fitness(identity_assignment(n), g, M)
        for _ in range(5):
            perm = tuple(int(v) for v in rng.permutation(n))
            assert fitness(Assignment(perm), g, M) == pytest.approx(base)

    def test_exhaustive_optimum_ring6(self):
        rng = np.random.default_rng(4)
        g = ring(6)
        M = random_mi(rng, 6)
        best = max(
            fitness(Assignment(p), g, M)
            for p in itertools.permutations(range(6))
        )
        # GA with a modest budget reaches the same optimum on 6! space
        cfg = GAConfig(population_size=100, n_generations=100, seed=0)
        _, got, _ = ga_optimize(g, M, cfg)
        assert got == pytest.approx(best, rel=1e-12)

    def test_dimension_mismatch(self):
        g = ring(4)
        M = random_mi(np.random.default_rng(0), 3)
        with pytest.raises(TopologyError):
            fitness(identity_assignment(4), g, M)


def planted_mi(rng, n, hidden):
    """High NMI exactly on ring-adjacent pairs under a hidden permutation."""
    v = np.full((n, n), 0.05)
    for i in range(n):
        a, b = hidden[i], hidden[(i + 1) % n]
        v[a, b] = v[b, a] = 0.9 + 0.01 * rng.random()
    np.fill_diagonal(v, 1.0)
    return MIMatrix(values=v, bins=4)


class TestGA:
    def test_determinism(self):
        rng = np.random.default_rng(5)
        g = ring(8)
        M = random_mi(rng, 8)
        cfg = GAConfig(population_size=30, n_generations=30, seed=11)
        pi1, f1, h1 = ga_optimize(g, M, cfg)
        pi2, f2, h2 = ga_optimize(g, M, cfg)
        assert pi1 == pi2 and f1 == f2 and h1 == h2

    def test_history_non_decreasing(self):
        rng = np.random.default_rng(6)
        g = ring(8)
        M = random_mi(rng, 8)
        cfg = GAConfig(population_size=40, n_generations=60, seed=2)
        _, _, history = ga_optimize(g, M, cfg)
        assert all(b >= a for a, b in zip(history, history[1:]))

    def test_fixed_point_without_mutation(self):
        rng = np.random.default_rng(7)
        g = ring(6)
        M = random_mi(rng, 6)
        cfg = GAConfig(population_size=10, n_generations=20, mutation_rate=0.0,
                       crossover_rate=0.0, seed=3)
        _, _, history = ga_optimize(g, M, cfg)
        # no variation operators: the best individual never improves
        assert len(set(history)) == 1

    def test_planted_optimum_n8(self):
        rng = np.random.default_rng(8)
        hidden = tuple(int(v) for v in rng.permutation(8))
        M = planted_mi(rng, 8, hidden)
        g = ring(8)
        best = max(
            fitness(Assignment(p), g, M)
            for p in itertools.permutations(range(8))
        )
        cfg = GAConfig(population_size=100, n_generations=150, seed=0)
        _, got, _ = ga_optimize(g, M, cfg)
        assert got >= 0.95 * best

    def test_size_mismatch(self):
        M = random_mi(np.random.default_rng(0), 5)
        with pytest.raises(TopologyError, match="pre-select"):
            ga_optimize(ring(6), M, GAConfig(population_size=4, n_generations=1))

    def test_crossover_preserves_bijection(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            n = int(rng.integers(3, 12))
            p1 = rng.permutation(n)
            p2 = rng.permutation(n)
            child = _order_crossover(p1, p2, rng)
            assert sorted(child.tolist()) == list(range(n))

    def test_config_validation(self):
        with pytest.raises(TopologyError):
            GAConfig(population_size=1)
        with pytest.raises(TopologyError):
            GAConfig(mutation_rate=1.5)
        with pytest.raises(TopologyError):
            GAConfig(population_size=4, elitism_count=4)


class TestAssignment:
    def test_not_a_permutation(self):
        with pytest.raises(TopologyError):
            Assignment(perm=(0, 0, 1))

    def test_json_round_trip(self):
        pi = Assignment(perm=(2, 0, 1))
        text = pi.to_json(fitness=1.5, history=[1.0, 1.5])
        obj = json.loads(text)
        assert obj["fitness"] == 1.5
        assert Assignment.from_json(text) == pi
