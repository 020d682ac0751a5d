"""Hardware connectivity graphs and GA-based variable-to-qubit assignment.

A HardwareGraph is a plain undirected graph over qubit indices; valid
three-body interaction supports are the connected induced 3-subgraphs
(paths of length 2 and triangles). The genetic algorithm searches for a
permutation of features onto qubits that maximizes the normalized mutual
information preserved on the graph's edges and triplets.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, asdict

import numpy as np

from .infometrics import MIMatrix, HyperCoeffs, hyper_coeff


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class HardwareGraph:
    n_qubits: int
    edges: frozenset

    def __post_init__(self):
        for e in self.edges:
            i, j = e
            if i == j:
                raise TopologyError(f"self-loop at qubit {i}")
            if not (0 <= i < self.n_qubits and 0 <= j < self.n_qubits):
                raise TopologyError(f"edge {e} out of range")
            if e != tuple(sorted(e)):
                raise TopologyError(f"edge {e} not stored sorted")

    @classmethod
    def from_edges(cls, n_qubits: int, edges) -> "HardwareGraph":
        if n_qubits < 1:
            raise TopologyError("graph must have at least 1 qubit")
        canon = frozenset(tuple(sorted((int(i), int(j)))) for i, j in edges)
        return cls(n_qubits=n_qubits, edges=canon)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbors(self, i: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == i:
                out.add(b)
            elif b == i:
                out.add(a)
        return out

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def to_json(self) -> str:
        return json.dumps(
            {"n_qubits": self.n_qubits,
             "edges": [list(e) for e in self.sorted_edges()]},
            separators=(",", ":"), sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "HardwareGraph":
        obj = json.loads(text)
        return cls.from_edges(int(obj["n_qubits"]), obj["edges"])


def ring(n: int) -> HardwareGraph:
    """Cycle graph: n qubits, n edges, every degree 2."""
    if n < 3:
        raise TopologyError("ring needs n >= 3")
    return HardwareGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def heavy_hex_patch(rows: int, cols: int) -> HardwareGraph:
    """Heavy-hex lattice patch: `rows` linear chains of `cols` qubits joined
    by bridge qubits every 4 columns, alternating offset per layer.

    Every node has degree <= 3. heavy_hex_patch(8, 16) reproduces a
    156-qubit device layout.
    """
    if rows < 1 or cols < 1:
        raise TopologyError("rows and cols must be >= 1")
    return _heavy_hex_build(rows, cols)


def _heavy_hex_build(rows: int, cols: int) -> HardwareGraph:
    ids = {}
    next_id = 0
    for r in range(rows):
        for c in range(cols):
            ids[("q", r, c)] = next_id
            next_id += 1
        if r < rows - 1:
            offset = 0 if r % 2 == 0 else 2
            for c in range(offset, cols, 4):
                ids[("b", r, c)] = next_id
                next_id += 1
    edges = []
    for r in range(rows):
        for c in range(cols - 1):
            edges.append((ids[("q", r, c)], ids[("q", r, c + 1)]))
    for key, b in ids.items():
        if key[0] != "b":
            continue
        _, r, c = key
        edges.append((ids[("q", r, c)], b))
        edges.append((b, ids[("q", r + 1, c)]))
    return HardwareGraph.from_edges(next_id, edges)


def load_graph(path) -> HardwareGraph:
    with open(path) as fh:
        return HardwareGraph.from_json(fh.read())


def enumerate_triplets(g: HardwareGraph) -> set:
    """All unordered qubit triples whose induced subgraph is connected."""
    adj = {i: g.neighbors(i) for i in range(g.n_qubits)}
    triples = set()
    for i, j in g.edges:
        # any common or adjacent third node completes a connected triple
        for k in adj[i] | adj[j]:
            if k != i and k != j:
                triples.add(tuple(sorted((i, j, k))))
    return triples


@dataclass(frozen=True)
class Assignment:
    """Bijection from qubit index to feature index: perm[qubit] = feature."""

    perm: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise TopologyError("assignment is not a permutation")

    def __len__(self) -> int:
        return len(self.perm)

    def __getitem__(self, qubit: int) -> int:
        return self.perm[qubit]

    def to_json(self, fitness: float | None = None, history=None) -> str:
        obj: dict = {"perm": list(self.perm)}
        if fitness is not None:
            obj["fitness"] = fitness
        if history is not None:
            obj["history"] = list(history)
        return json.dumps(obj, separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Assignment":
        return cls(perm=tuple(int(i) for i in json.loads(text)["perm"]))


def identity_assignment(n: int) -> Assignment:
    return Assignment(perm=tuple(range(n)))


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 200
    n_generations: int = 500
    tournament_size: int = 3
    crossover_rate: float = 0.9
    mutation_rate: float = 0.2
    elitism_count: int = 1
    seed: int = 0
    lambda2: float = 1.0
    lambda3: float = 1.0

    def __post_init__(self):
        if self.population_size < 2:
            raise TopologyError("population_size must be >= 2")
        for name in ("crossover_rate", "mutation_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise TopologyError(f"{name} must be in [0, 1]")
        if not 0 <= self.elitism_count < self.population_size:
            raise TopologyError("elitism_count must be < population_size")

    def to_dict(self) -> dict:
        return asdict(self)


def fitness(pi: Assignment, g: HardwareGraph, M: MIMatrix,
            H3: HyperCoeffs | None = None,
            lambda2: float = 1.0, lambda3: float = 1.0,
            triplets=None) -> float:
    """Information preserved by an assignment on the hardware graph."""
    if len(pi) != g.n_qubits:
        raise TopologyError("assignment size does not match qubit count")
    if M.n < g.n_qubits:
        raise TopologyError("MI matrix smaller than qubit count")
    total = lambda2 * sum(M.values[pi[i], pi[j]] for i, j in g.edges)
    if lambda3 != 0.0:
        if triplets is None:
            triplets = enumerate_triplets(g)
        for i, j, k in triplets:
            S = (pi[i], pi[j], pi[k])
            total += lambda3 * (H3[S] if H3 is not None else hyper_coeff(S, M))
    return float(total)


def _batch_fitness(pop: np.ndarray, edges: np.ndarray, triples: np.ndarray,
                   M: np.ndarray, lambda2: float, lambda3: float) -> np.ndarray:
    f = np.zeros(pop.shape[0])
    if edges.size and lambda2 != 0.0:
        f += lambda2 * M[pop[:, edges[:, 0]], pop[:, edges[:, 1]]].sum(axis=1)
    if triples.size and lambda3 != 0.0:
        a = pop[:, triples[:, 0]]
        b = pop[:, triples[:, 1]]
        c = pop[:, triples[:, 2]]
        f += lambda3 * ((M[a, b] + M[a, c] + M[b, c]) / 3.0).sum(axis=1)
    return f


def _order_crossover(p1: np.ndarray, p2: np.ndarray, rng) -> np.ndarray:
    n = p1.shape[0]
    a, b = sorted(rng.choice(n, size=2, replace=False))
    return _ox(p1, p2, a, b)


def _ox(p1: np.ndarray, p2: np.ndarray, a: int, b: int) -> np.ndarray:
    """Order crossover: keep p1[a:b+1] in place, fill the rest from p2."""
    n = p1.shape[0]
    child = np.empty(n, dtype=p1.dtype)
    child[a:b + 1] = p1[a:b + 1]
    taken = np.zeros(n, dtype=bool)
    taken[p1[a:b + 1]] = True
    fill = p2[~taken[p2]]
    child[:a] = fill[:a]
    child[b + 1:] = fill[a:]
    return child


def _distinct_pairs(rng, n: int, count: int) -> np.ndarray:
    """count uniform pairs of distinct indices in [0, n), shape (count, 2)."""
    a = rng.integers(0, n, size=count)
    b = rng.integers(0, n - 1, size=count)
    b += b >= a
    return np.stack([a, b], axis=1)


def ga_optimize(g: HardwareGraph, M: MIMatrix, cfg: GAConfig,
                H3: HyperCoeffs | None = None):
    """Tournament-selection GA over feature permutations.

    Returns (best Assignment, best fitness, per-generation best-so-far
    history). Elitism keeps the history non-decreasing; the run is fully
    determined by cfg.seed.
    """
    n = g.n_qubits
    if M.n != n:
        raise TopologyError(
            f"feature count ({M.n}) must equal qubit count ({n}); "
            "pre-select features to the qubit budget first"
        )
    rng = np.random.default_rng(cfg.seed)
    edges = np.array(g.sorted_edges(), dtype=np.intp).reshape(-1, 2)
    triples = np.array(sorted(enumerate_triplets(g)), dtype=np.intp).reshape(-1, 3)
    Mv = M.values

    pop = np.stack([rng.permutation(n) for _ in range(cfg.population_size)])
    fits = _batch_fitness(pop, edges, triples, Mv, cfg.lambda2, cfg.lambda3)
    best_i = int(np.argmax(fits))
    best_pi, best_f = pop[best_i].copy(), float(fits[best_i])

    n_children = cfg.population_size - cfg.elitism_count
    history = []
    for _ in range(cfg.n_generations):
        order = np.argsort(-fits, kind="stable")
        elite = pop[order[:cfg.elitism_count]]
        # draw all per-child randomness for the generation in one batch
        cand = rng.integers(0, cfg.population_size,
                            size=(2, n_children, cfg.tournament_size))
        pick = np.argmax(fits[cand], axis=2)
        winners = np.take_along_axis(cand, pick[..., None], axis=2)[..., 0]
        p1s, p2s = pop[winners[0]], pop[winners[1]]
        do_cx = rng.random(n_children) < cfg.crossover_rate
        cuts = np.sort(_distinct_pairs(rng, n, n_children), axis=1)
        do_mut = rng.random(n_children) < cfg.mutation_rate
        swaps = _distinct_pairs(rng, n, n_children)

        children = p1s.copy()
        for c in np.flatnonzero(do_cx):
            children[c] = _ox(p1s[c], p2s[c], int(cuts[c, 0]), int(cuts[c, 1]))
        mut = np.flatnonzero(do_mut)
        a, b = swaps[mut, 0], swaps[mut, 1]
        tmp = children[mut, a].copy()
        children[mut, a] = children[mut, b]
        children[mut, b] = tmp

        pop = np.concatenate([elite, children]) if cfg.elitism_count else children
        fits = _batch_fitness(pop, edges, triples, Mv, cfg.lambda2, cfg.lambda3)
        gen_best = int(np.argmax(fits))
        if fits[gen_best] > best_f:
            best_f = float(fits[gen_best])
            best_pi = pop[gen_best].copy()
        history.append(best_f)

    return Assignment(perm=tuple(int(v) for v in best_pi)), best_f, history
