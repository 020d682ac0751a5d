"""Data-dependent spin-glass Hamiltonians and their counterdiabatic drive.

The encoding Hamiltonian is a diagonal Z-polynomial: single-qubit fields
carry the (scaled) feature values, k-body couplings carry the hypercoupling
coefficients of the mapped feature subsets. The adiabatic interpolation is

    H_ad(t) = A(t) * H_mix + B(t) * H_z,    H_mix = -sum_i X_i,

with A = 1 - lam(t), B = lam(t). The first-order counterdiabatic generator
is i * alpha * [H_ad, dH_ad/dt]; since [H_mix, H_z] turns each Z-monomial of
support S into a sum of one-Y words (Y on one support qubit, Z on the rest),
the generator expands in closed form as

    -2 * alpha(t) * (A*B' - A'*B) * sum_S c_S sum_{j in S} Y_j prod_{i != j} Z_i.

The scalar alpha is the variational optimum alpha = Tr(K^2) / Tr(L^2) with
K = [H_ad, dH_ad] and L = [H_ad, K], evaluated with Pauli trace algebra so
no dense matrices are ever built.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np


class EncodeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Z polynomials

@dataclass(frozen=True)
class ZPolynomial:
    """Diagonal k-local Hamiltonian: sum of c_S * prod_{i in S} Z_i."""

    n_qubits: int
    terms: tuple  # ((sorted index tuple, coeff), ...)

    def __post_init__(self):
        seen = set()
        for support, coeff in self.terms:
            if not support:
                raise EncodeError("empty support")
            if support != tuple(sorted(support)):
                raise EncodeError(f"support {support} not sorted")
            if support in seen:
                raise EncodeError(f"duplicate support {support}")
            if any(i < 0 or i >= self.n_qubits for i in support):
                raise EncodeError(f"support {support} out of range")
            if not math.isfinite(coeff):
                raise EncodeError(f"non-finite coefficient on {support}")
            seen.add(support)

    @classmethod
    def from_terms(cls, n_qubits: int, terms, drop_below: float = 1e-12):
        merged: dict = {}
        for support, coeff in terms:
            key = tuple(sorted(int(i) for i in support))
            merged[key] = merged.get(key, 0.0) + float(coeff)
        kept = tuple(
            (s, c) for s, c in sorted(merged.items()) if abs(c) >= drop_below
        )
        return cls(n_qubits=n_qubits, terms=kept)

    def to_json(self) -> str:
        return json.dumps(
            {"n_qubits": self.n_qubits,
             "terms": [[list(s), c] for s, c in self.terms]},
            separators=(",", ":"), sort_keys=True,
        )


def encode_hamiltonian(x, g, coeffs: dict, pi, K: int) -> ZPolynomial:
    """Spin-glass encoding: fields from the sample, couplings from the data's
    mutual-information structure, restricted to the hardware graph.

    `coeffs` maps interaction order k (2..K) to a HyperCoeffs over *feature*
    subsets; `pi` maps qubit index to feature index.
    """
    from .topology import enumerate_triplets

    x = np.asarray(x, dtype=np.float64)
    n = g.n_qubits
    if K not in (2, 3):
        raise EncodeError("K must be 2 or 3")
    if x.shape[0] != n:
        raise EncodeError(f"sample has {x.shape[0]} entries for {n} qubits")
    if len(pi) != n:
        raise EncodeError("assignment size does not match qubit count")

    terms = [((i,), float(x[pi[i]])) for i in range(n)]
    for i, j in g.sorted_edges():
        c = coeffs[2][(pi[i], pi[j])]
        terms.append(((i, j), c))
    if K >= 3:
        if 3 not in coeffs:
            raise EncodeError("K=3 requires order-3 coefficients")
        for i, j, k in sorted(enumerate_triplets(g)):
            c = coeffs[3][(pi[i], pi[j], pi[k])]
            terms.append(((i, j, k), c))
    return ZPolynomial.from_terms(n, terms)


# ---------------------------------------------------------------------------
# Schedules

_PROFILES = ("sin2", "linear")


@dataclass(frozen=True)
class Schedule:
    """Interpolation schedule lam(0)=0, lam(T)=1 with A=1-lam, B=lam."""

    total_time: float = 1.0
    profile: str = "sin2"
    n_steps: int = 1

    def __post_init__(self):
        if self.total_time <= 0:
            raise EncodeError("total_time must be positive")
        if self.profile not in _PROFILES:
            raise EncodeError(f"unknown profile {self.profile!r}")
        if self.n_steps < 1:
            raise EncodeError("n_steps must be >= 1")

    @property
    def dt(self) -> float:
        return self.total_time / self.n_steps

    def lam(self, t: float) -> float:
        u = t / self.total_time
        if self.profile == "sin2":
            return math.sin(math.pi * u / 2.0) ** 2
        return u

    def dlam(self, t: float) -> float:
        if self.profile == "sin2":
            return (math.pi / (2.0 * self.total_time)) * math.sin(
                math.pi * t / self.total_time
            )
        return 1.0 / self.total_time

    def A(self, t: float) -> float:
        return 1.0 - self.lam(t)

    def B(self, t: float) -> float:
        return self.lam(t)

    def dA(self, t: float) -> float:
        return -self.dlam(t)

    def dB(self, t: float) -> float:
        return self.dlam(t)

    def wronskian(self, t: float) -> float:
        """A*B' - A'*B; the commutator prefactor. Equals lam'(t)."""
        return self.A(t) * self.dB(t) - self.dA(t) * self.B(t)

    def _check_t(self, t: float) -> None:
        if not 0.0 <= t <= self.total_time + 1e-12:
            raise EncodeError(f"t={t} outside [0, {self.total_time}]")


# ---------------------------------------------------------------------------
# Pauli words and sums

@dataclass(frozen=True)
class PauliTerm:
    coeff: float
    word: str

    def __post_init__(self):
        if not math.isfinite(self.coeff):
            raise EncodeError("non-finite coefficient")
        if any(ch not in "IXYZ" for ch in self.word):
            raise EncodeError(f"bad Pauli word {self.word!r}")


# single-site products: _MUL[(a, b)] = (phase, result)
_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("Y", "I"): (1, "Y"), ("Z", "I"): (1, "Z"),
    ("X", "X"): (1, "I"), ("Y", "Y"): (1, "I"), ("Z", "Z"): (1, "I"),
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}


def _mul_words(w1: str, w2: str) -> tuple[complex, str]:
    phase = 1 + 0j
    out = []
    for a, b in zip(w1, w2):
        p, r = _MUL[(a, b)]
        phase *= p
        out.append(r)
    return phase, "".join(out)


def _sum_commutator(s1: dict, s2: dict) -> dict:
    """[S1, S2] for Pauli sums stored as word -> complex coefficient."""
    out: dict = {}
    for w1, c1 in s1.items():
        for w2, c2 in s2.items():
            p12, w = _mul_words(w1, w2)
            p21, _ = _mul_words(w2, w1)
            coeff = c1 * c2 * (p12 - p21)
            if coeff != 0:
                out[w] = out.get(w, 0j) + coeff
    return {w: c for w, c in out.items() if c != 0}


def _trace_sq(s: dict) -> complex:
    """Normalized trace Tr(S^2) / 2^n for a Pauli sum."""
    return sum(c * c for c in s.values())


def _mixer_sum(n: int) -> dict:
    return {"I" * i + "X" + "I" * (n - i - 1): -1.0 + 0j for i in range(n)}


def _z_sum(hz: ZPolynomial) -> dict:
    out = {}
    for support, coeff in hz.terms:
        word = "".join("Z" if i in support else "I" for i in range(hz.n_qubits))
        out[word] = complex(coeff)
    return out


def alpha(hz: ZPolynomial, sched: Schedule, t: float) -> float:
    """Variational CD coefficient Tr(K^2) / Tr(L^2).

    With K = [H_ad, dH_ad] = W(t) * C and L = [H_ad, K] for
    C = [H_mix, H_z], the schedule prefactor W cancels:

        alpha = Tr(C^2) / Tr((A*[H_mix, C] + B*[H_z, C])^2)

    so the value is finite for any t, and negative for nontrivial H_z.
    """
    sched._check_t(t)
    if not hz.terms:
        raise EncodeError("alpha undefined for an empty Hamiltonian")
    n = hz.n_qubits
    hmix = _mixer_sum(n)
    hzs = _z_sum(hz)
    C = _sum_commutator(hmix, hzs)
    num = _trace_sq(C)
    A_, B_ = sched.A(t), sched.B(t)
    L = {}
    for w, c in _sum_commutator(hmix, C).items():
        L[w] = L.get(w, 0j) + A_ * c
    for w, c in _sum_commutator(hzs, C).items():
        L[w] = L.get(w, 0j) + B_ * c
    den = _trace_sq(L)
    if abs(den) < 1e-300:
        raise EncodeError("degenerate denominator in alpha")
    val = num / den
    if abs(val.imag) > 1e-9 * max(1.0, abs(val.real)):
        raise EncodeError("alpha is not real; inconsistent Pauli algebra")
    return float(val.real)


def cd_terms(hz: ZPolynomial, sched: Schedule, t: float) -> list[PauliTerm]:
    """First-order CD generator expanded into one-Y Pauli words.

    Ordering is lexicographic by (sorted support, position of the Y).
    """
    sched._check_t(t)
    n = hz.n_qubits
    if not hz.terms:
        return []
    pref = -2.0 * alpha(hz, sched, t) * sched.wronskian(t)
    out = []
    for support, coeff in hz.terms:
        for j in support:
            word = "".join(
                "Y" if i == j else ("Z" if i in support else "I")
                for i in range(n)
            )
            out.append(PauliTerm(coeff=pref * coeff, word=word))
    return out


def trotter_sequence(hz: ZPolynomial, sched: Schedule,
                     impulse: bool = True) -> list[tuple[PauliTerm, float]]:
    """Ordered (PauliTerm, rotation angle) list for the digitized evolution.

    Impulse mode: a single step containing only the CD generator evaluated
    at t = T/2, angles = dt * coefficient (dt = T). Full mode: for each step
    j = 1..N at t = j*dt, the mixer X fields, then the Z-polynomial terms
    (sorted supports), then the CD terms, each with angle = dt * coefficient.
    """
    n = hz.n_qubits
    dt = sched.dt
    if impulse:
        t_star = sched.total_time / 2.0
        terms = cd_terms(hz, sched, t_star)
        return [(p, sched.total_time * p.coeff) for p in terms]

    seq = []
    for j in range(1, sched.n_steps + 1):
        t = j * dt
        A_, B_ = sched.A(t), sched.B(t)
        for i in range(n):
            word = "I" * i + "X" + "I" * (n - i - 1)
            seq.append((PauliTerm(coeff=-A_, word=word), dt * -A_))
        for support, coeff in hz.terms:
            word = "".join("Z" if i in support else "I" for i in range(n))
            c = B_ * coeff
            seq.append((PauliTerm(coeff=c, word=word), dt * c))
        for p in cd_terms(hz, sched, t):
            seq.append((p, dt * p.coeff))
    return seq
