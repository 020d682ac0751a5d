"""Exact statevector simulation of Pauli-word rotations.

Amplitudes are complex128 in little-endian order: qubit i corresponds to bit
i of the basis-state index (qubit 0 = least significant bit). A rotation by
angle theta applies exp(-i * theta * P) without materializing any matrix:
P|b> is a permutation of amplitudes (X/Y flips) times a diagonal phase
(Y/Z parities), so each rotation costs O(2^n).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

DEFAULT_MAX_QUBITS = 24


class SimulationError(ValueError):
    pass


@dataclass
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def copy(self) -> "Statevector":
        return Statevector(self.n_qubits, self.amplitudes.copy())

    def dump(self, path) -> None:
        """Binary dump: uint32 n, then 2^n complex128 amplitudes."""
        with open(path, "wb") as fh:
            fh.write(np.uint32(self.n_qubits).tobytes())
            fh.write(self.amplitudes.astype(np.complex128).tobytes())

    @classmethod
    def load(cls, path) -> "Statevector":
        with open(path, "rb") as fh:
            n = int(np.frombuffer(fh.read(4), dtype=np.uint32)[0])
            amps = np.frombuffer(fh.read(), dtype=np.complex128).copy()
        if amps.shape[0] != 1 << n:
            raise SimulationError("corrupt statevector dump")
        return cls(n, amps)


def plus_state(n: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> Statevector:
    """|+>^n: uniform real amplitudes 2^(-n/2)."""
    if n < 1:
        raise SimulationError("need at least 1 qubit")
    if n > max_qubits:
        raise SimulationError(
            f"{n} qubits exceeds the amplitude budget of {max_qubits} qubits "
            f"({(1 << max_qubits) * 16 // 2**20} MiB)"
        )
    dim = 1 << n
    amps = np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128)
    return Statevector(n, amps)


def basis_state(bits: str, max_qubits: int = DEFAULT_MAX_QUBITS) -> Statevector:
    """Computational basis state; bits[i] is the value of qubit i."""
    n = len(bits)
    if n < 1 or n > max_qubits:
        raise SimulationError("qubit count out of range")
    idx = sum(1 << i for i, b in enumerate(bits) if b == "1")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[idx] = 1.0
    return Statevector(n, amps)


def _parity(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values).astype(np.int64) & 1


def pauli_apply(state: Statevector, word: str) -> np.ndarray:
    """Return P @ amplitudes for the Pauli word (new array)."""
    n = state.n_qubits
    if len(word) != n:
        raise SimulationError(f"word length {len(word)} != {n} qubits")
    flip = 0
    phase_mask = 0
    n_y = 0
    for i, ch in enumerate(word):
        if ch == "X":
            flip |= 1 << i
        elif ch == "Y":
            flip |= 1 << i
            phase_mask |= 1 << i
            n_y += 1
        elif ch == "Z":
            phase_mask |= 1 << i
        elif ch != "I":
            raise SimulationError(f"bad Pauli letter {ch!r}")
    idx = np.arange(1 << n, dtype=np.uint64)
    src = idx ^ np.uint64(flip)
    out = state.amplitudes[src].copy()
    if phase_mask:
        signs = 1 - 2 * _parity(src & np.uint64(phase_mask))
        out *= signs
    if n_y:
        out *= 1j ** n_y
    return out


def apply_pauli_rotation(state: Statevector, word: str, theta: float) -> Statevector:
    """In-place exp(-i*theta*P): amps <- cos(theta)*amps - i*sin(theta)*P@amps.

    An all-identity word applies a global phase exp(-i*theta).
    """
    if theta == 0.0:
        return state
    p_amps = pauli_apply(state, word)
    state.amplitudes *= np.cos(theta)
    state.amplitudes -= 1j * np.sin(theta) * p_amps
    return state


def run_sequence(state: Statevector, seq) -> Statevector:
    """Apply (word-or-PauliTerm, angle) rotations in list order."""
    for term, angle in seq:
        word = term if isinstance(term, str) else term.word
        apply_pauli_rotation(state, word, angle)
    return state


@dataclass(frozen=True)
class ShotTable:
    """Bitstring counts from measuring in the computational basis.

    Keys are length-n strings with position i holding qubit i's bit.
    """

    counts: dict
    shots: int
    n_qubits: int

    def to_json(self) -> str:
        return json.dumps(
            {"n_qubits": self.n_qubits, "shots": self.shots,
             "counts": self.counts},
            separators=(",", ":"), sort_keys=True,
        )


def sample(state: Statevector, shots: int, seed: int) -> ShotTable:
    """Multinomial draw from |amplitude|^2, deterministic per seed."""
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draw = rng.multinomial(shots, probs)
    n = state.n_qubits
    counts = {}
    for idx in np.flatnonzero(draw):
        bits = "".join("1" if (idx >> q) & 1 else "0" for q in range(n))
        counts[bits] = int(draw[idx])
    return ShotTable(counts=counts, shots=shots, n_qubits=n)
