"""Z-observable feature maps along a closed chain.

Observables are 1-, 2-, and 3-body Z strings over ring-ordered qubit
indices: pairs (i, i+1 mod n) and triples (i, i+1, i+2 mod n). Expectations
come either from the exact statevector or from a shot table; both paths are
plain parity sums and stay in [-1, 1] by construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .simulate import Statevector, ShotTable


class ExtractError(ValueError):
    pass


def expect_z(source, support) -> float:
    """<prod_{i in support} Z_i> from a Statevector or ShotTable."""
    support = tuple(sorted(set(int(i) for i in support)))
    if not support:
        raise ExtractError("empty observable support")
    if isinstance(source, Statevector):
        n = source.n_qubits
        if support[-1] >= n:
            raise ExtractError(f"support {support} out of range for {n} qubits")
        mask = np.uint64(sum(1 << i for i in support))
        idx = np.arange(1 << n, dtype=np.uint64)
        signs = 1 - 2 * (np.bitwise_count(idx & mask).astype(np.int64) & 1)
        val = float(np.sum(np.abs(source.amplitudes) ** 2 * signs))
    elif isinstance(source, ShotTable):
        if support[-1] >= source.n_qubits:
            raise ExtractError("support out of range")
        total = 0
        for bits, c in source.counts.items():
            parity = sum(1 for i in support if bits[i] == "1") & 1
            total += -c if parity else c
        val = total / source.shots
    else:
        raise ExtractError(f"cannot take expectations from {type(source)!r}")
    if not -1.0 - 1e-9 <= val <= 1.0 + 1e-9:
        raise ExtractError(f"expectation {val} outside [-1, 1]")
    return min(1.0, max(-1.0, val))


@dataclass(frozen=True)
class ObservableSet:
    """Ring observables over n qubits; each active order has n entries."""

    n: int
    singles: bool = True
    pairs: bool = True
    triples: bool = True

    def single_supports(self) -> list[tuple[int, ...]]:
        return [(i,) for i in range(self.n)] if self.singles else []

    def pair_supports(self) -> list[tuple[int, ...]]:
        if not self.pairs:
            return []
        return [(i, (i + 1) % self.n) for i in range(self.n)]

    def triple_supports(self) -> list[tuple[int, ...]]:
        if not self.triples:
            return []
        return [(i, (i + 1) % self.n, (i + 2) % self.n) for i in range(self.n)]


def _descriptor(order: int, support, tag: str) -> str:
    return f"q{order}_" + "_".join(str(i) for i in support) + f"_{tag}"


@dataclass(frozen=True)
class FeatureRecord:
    """Ordered (descriptor, value) pairs for one sample."""

    sample_id: int
    entries: tuple  # ((descriptor, value), ...)

    def __post_init__(self):
        names = [d for d, _ in self.entries]
        if len(set(names)) != len(names):
            raise ExtractError("duplicate descriptors in record")
        for d, v in self.entries:
            if not -1.0 <= v <= 1.0:
                raise ExtractError(f"{d}: value {v} outside [-1, 1]")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(d for d, _ in self.entries)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.entries], dtype=np.float64)


def feature_map(states: dict, obs: ObservableSet, source_plan: dict,
                sample_id: int = 0) -> FeatureRecord:
    """Measure the observable set, routing each order to its dynamics.

    `states` maps a dynamics tag (e.g. "k2", "k3") to a final state or shot
    table; `source_plan` maps order (1, 2, 3) to the tag that feeds it.
    Descriptor order is singles ascending, then pairs, then triples.
    """
    entries = []
    blocks = (
        (1, obs.single_supports()),
        (2, obs.pair_supports()),
        (3, obs.triple_supports()),
    )
    for order, supports in blocks:
        if not supports:
            continue
        tag = source_plan.get(order)
        if tag is None:
            raise ExtractError(f"no dynamics assigned for order {order}")
        if tag not in states:
            raise ExtractError(f"missing state for dynamics {tag!r}")
        src = states[tag]
        for support in supports:
            entries.append(
                (_descriptor(order, support, tag), expect_z(src, support))
            )
    return FeatureRecord(sample_id=sample_id, entries=tuple(entries))


# dual dynamics: singles and pairs from the K=2 circuit, triples from K=3
DUAL_PLAN = {1: "k2", 2: "k2", 3: "k3"}
# single dynamics: all orders from the one K=2 circuit
SINGLE_PLAN = {1: "k2", 2: "k2", 3: "k2"}


def plan_for(ks: list[int]) -> dict:
    ks = sorted(set(ks))
    if ks == [2]:
        return dict(SINGLE_PLAN)
    if ks == [2, 3]:
        return dict(DUAL_PLAN)
    raise ExtractError(f"unsupported dynamics plan {ks}")


def concat_features(classical_names, classical_values,
                    quantum: FeatureRecord) -> tuple[tuple, np.ndarray]:
    """Classical block first (names prefixed 'c_'), quantum blocks after."""
    names = tuple(f"c_{n}" for n in classical_names) + quantum.names
    if len(set(names)) != len(names):
        raise ExtractError("name collision between classical and quantum blocks")
    values = np.concatenate(
        [np.asarray(classical_values, dtype=np.float64), quantum.values]
    )
    return names, values
