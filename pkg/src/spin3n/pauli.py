"""Pauli strings over the 2n physical qubits and product-state expectations.

Qubit 1 is the most significant tensor factor. Line ``k`` owns the auxiliary
qubit ``2k-1`` and the primary qubit ``2k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .linalg import PAULI, TOL_EXACT

LABELS = "IXYZ"
_INDEX = {c: i for i, c in enumerate(LABELS)}

# (a, b) -> (exponent of i, label of a*b) for single-qubit Paulis
_MUL: dict[tuple[str, str], tuple[int, str]] = {}
for _a in LABELS:
    _MUL[("I", _a)] = (0, _a)
    _MUL[(_a, "I")] = (0, _a)
    _MUL[(_a, _a)] = (0, "I")
for _a, _b, _c in ("XYZ", "YZX", "ZXY"):
    _MUL[(_a, _b)] = (1, _c)
    _MUL[(_b, _a)] = (3, _c)

MAX_DENSE_QUBITS = 10


@dataclass(frozen=True)
class PauliString:
    """``i**phase`` times a tensor product of single-qubit Pauli labels."""

    phase: int
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)
        labels = tuple(self.labels)
        if any(c not in _INDEX for c in labels):
            raise ValueError(f"invalid Pauli labels {labels!r}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def identity(cls, num_qubits: int) -> PauliString:
        return cls(0, ("I",) * num_qubits)

    @classmethod
    def from_str(cls, text: str) -> PauliString:
        """Parse strings such as ``"-iXIZY"`` or ``"+YX"``."""
        text = text.strip()
        phase = 0
        for prefix, p in (("-i", 3), ("+i", 1), ("i", 1), ("-", 2), ("+", 0)):
            if text.startswith(prefix):
                phase, text = p, text[len(prefix):]
                break
        return cls(phase, tuple(text))

    @property
    def num_qubits(self) -> int:
        return len(self.labels)

    @property
    def coefficient(self) -> complex:
        return 1j**self.phase

    def __mul__(self, other: PauliString) -> PauliString:
        return pauli_mul(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.phase + 2, self.labels)

    def scaled(self, phase: int) -> PauliString:
        """Multiply by ``i**phase``."""
        return PauliString(self.phase + phase, self.labels)

    def is_identity(self) -> bool:
        return all(c == "I" for c in self.labels)

    def commutes_with(self, other: PauliString) -> bool:
        clashes = sum(1 for a, b in zip(self.labels, other.labels) if a != "I" and b != "I" and a != b)
        return clashes % 2 == 0

    def support(self) -> list[int]:
        """1-based qubit indices carrying a non-identity label."""
        return [q + 1 for q, c in enumerate(self.labels) if c != "I"]

    def to_matrix(self) -> np.ndarray:
        if self.num_qubits > MAX_DENSE_QUBITS:
            raise ValueError(f"dense conversion limited to {MAX_DENSE_QUBITS} qubits")
        return self.coefficient * _dense_labels(self.labels)

    def __str__(self) -> str:
        return ("", "i", "-", "-i")[self.phase] + "".join(self.labels)


@lru_cache(maxsize=4096)
def _dense_labels(labels: tuple[str, ...]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for c in labels:
        out = np.kron(out, PAULI[_INDEX[c]])
    out.setflags(write=False)
    return out


def pauli_mul(p: PauliString, q: PauliString) -> PauliString:
    if len(p.labels) != len(q.labels):
        raise ValueError(f"length mismatch: {len(p.labels)} vs {len(q.labels)}")
    phase = p.phase + q.phase
    labels = []
    for a, b in zip(p.labels, q.labels):
        dp, c = _MUL[(a, b)]
        phase += dp
        labels.append(c)
    return PauliString(phase, tuple(labels))


def _check_line(k: int, n: int) -> None:
    if n < 1:
        raise ValueError(f"need at least one line, got n={n}")
    if not 1 <= k <= n:
        raise IndexError(f"line index {k} out of range 1..{n}")


def _prefix(k: int, n: int) -> list[str]:
    labels = ["I"] * (2 * n)
    for l in range(1, k):
        labels[2 * l - 2] = "Z"
    return labels


@lru_cache(maxsize=None)
def generator(j: int, k: int, n: int) -> PauliString:
    """Clifford generator ``e_j`` of line ``k`` (j = 1, 2, 3); Hermitian, squares to 1."""
    _check_line(k, n)
    if j not in (1, 2, 3):
        raise IndexError(f"generator index j={j} out of range 1..3")
    labels = _prefix(k, n)
    labels[2 * k - 2] = "Y"
    labels[2 * k - 1] = LABELS[j]
    return PauliString(0, tuple(labels))


@lru_cache(maxsize=None)
def generator_zero(k: int, n: int) -> PauliString:
    """The extra generator ``e_0`` of line ``k``; anti-Hermitian, squares to -1."""
    _check_line(k, n)
    labels = _prefix(k, n)
    labels[2 * k - 2] = "X"
    return PauliString(3, tuple(labels))


@lru_cache(maxsize=None)
def iota(k: int, n: int) -> PauliString:
    """Per-line 'imaginary unit' ``e_1 e_2 e_3`` of line ``k``."""
    _check_line(k, n)
    labels = _prefix(k, n)
    labels[2 * k - 2] = "Y"
    return PauliString(1, tuple(labels))


def jw_generator(m: int, num_qubits: int) -> PauliString:
    """Jordan-Wigner generator ``e_m`` (m = 1..2N) on ``num_qubits`` qubits; squares to -1."""
    if num_qubits < 1 or not 1 <= m <= 2 * num_qubits:
        raise IndexError(f"Jordan-Wigner index {m} out of range 1..{2 * num_qubits}")
    k = (m + 1) // 2
    labels = ["Z"] * (k - 1) + ["X" if m % 2 else "Y"] + ["I"] * (num_qubits - k)
    return PauliString(1, tuple(labels))


@lru_cache(maxsize=None)
def line_generators(n: int) -> tuple[PauliString, ...]:
    """All 3n generators in plain order, position ``3(k-1) + (j-1)``."""
    return tuple(generator(j, k, n) for k in range(1, n + 1) for j in (1, 2, 3))


@dataclass(frozen=True)
class ProductState:
    """Tensor product of normalized single-qubit states, qubit 1 first."""

    qubits: tuple[np.ndarray, ...]
    _bloch: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        qs = []
        for idx, v in enumerate(self.qubits, start=1):
            v = np.asarray(v, dtype=complex).reshape(-1)
            if v.shape != (2,):
                raise ValueError(f"qubit {idx}: expected a 2-vector, got shape {v.shape}")
            if abs(np.linalg.norm(v) - 1) >= TOL_EXACT:
                raise ValueError(f"qubit {idx}: state is not normalized")
            v = v.copy()
            v.setflags(write=False)
            qs.append(v)
        object.__setattr__(self, "qubits", tuple(qs))
        # row m holds <psi_m| sigma_c |psi_m> for c in I, X, Y, Z
        bloch = np.array([[np.vdot(v, s @ v) for s in PAULI] for v in qs], dtype=complex).reshape(-1, 4)
        bloch.setflags(write=False)
        object.__setattr__(self, "_bloch", bloch)

    @classmethod
    def zeros(cls, num_qubits: int) -> ProductState:
        return cls(tuple(np.array([1, 0], dtype=complex) for _ in range(num_qubits)))

    @classmethod
    def basis(cls, bits: Sequence[int]) -> ProductState:
        return cls(tuple(np.array([1, 0] if b == 0 else [0, 1], dtype=complex) for b in bits))

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    @property
    def bloch(self) -> np.ndarray:
        """``(2n, 4)`` table of single-qubit expectations of I, X, Y, Z."""
        return self._bloch

    def is_computational(self, qubit: int, tol: float = TOL_EXACT) -> bool:
        v = self.qubits[qubit - 1]
        return bool(abs(v[0]) < tol or abs(v[1]) < tol)

    def to_vector(self) -> np.ndarray:
        out = np.ones(1, dtype=complex)
        for v in self.qubits:
            out = np.kron(out, v)
        return out

    def __eq__(self, other):
        if not isinstance(other, ProductState):
            return NotImplemented
        return len(self.qubits) == len(other.qubits) and all(
            np.array_equal(a, b) for a, b in zip(self.qubits, other.qubits)
        )

    def __hash__(self):
        return hash(tuple(tuple(v) for v in self.qubits))


def expectation(p: PauliString, state: ProductState) -> complex:
    """``<state| p |state>`` as a product of single-qubit factors."""
    if p.num_qubits != state.num_qubits:
        raise ValueError(f"length mismatch: {p.num_qubits} vs {state.num_qubits}")
    table = state.bloch
    out = p.coefficient
    for m, c in enumerate(p.labels):
        if c != "I":
            out *= table[m, _INDEX[c]]
            if out == 0:
                return 0j
    return complex(out)
