"""Polynomial-time simulation of Spin(3n) circuits.

A circuit is compiled into a single 3n x 3n rotation ``R`` describing the
Heisenberg image of every generator, ``U^dag e_a U = sum_b R[a, b] e_b``.
Single-qubit Z statistics then follow from expectation values of short
generator products on the initial product state.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import pauli, spinmap
from .linalg import TOL_COMPOSE, TOL_EXACT, as_matrix, check_unitary
from .pauli import PauliString, ProductState, expectation

# sigma_3 on the primary qubit 2k equals EVEN_SIGN * i e_1 e_2 of line k
EVEN_SIGN = -1
# sigma_3 on the auxiliary qubit 2k-1 equals ODD_SIGN * i e_0 e_1 e_2 e_3 of line k
ODD_SIGN = -1


class ConsistencyError(RuntimeError):
    """Raised when an internal identity (e.g. a vanishing imaginary part) fails."""


class FastPathUnavailable(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Gate:
    """One-line gate (2x2 unitary) or two-line gate (4x4 unitary on lines ``l < m``)."""

    lines: tuple[int, ...]
    unitary: np.ndarray

    def __post_init__(self):
        lines = (self.lines,) if isinstance(self.lines, (int, np.integer)) else tuple(int(l) for l in self.lines)
        if len(lines) not in (1, 2):
            raise ValueError("gates act on one or two lines")
        if len(lines) == 2 and not lines[0] < lines[1]:
            raise ValueError(f"two-line gates need l < m, got {lines}")
        if any(l < 1 for l in lines):
            raise IndexError(f"line indices are 1-based, got {lines}")
        u = check_unitary(as_matrix(self.unitary))
        d = 2 ** len(lines)
        if u.shape != (d, d):
            raise ValueError(f"{len(lines)}-line gate needs a {d}x{d} unitary, got {u.shape}")
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "lines", lines)
        object.__setattr__(self, "unitary", u)

    @classmethod
    def single(cls, line: int, unitary) -> Gate:
        return cls((line,), unitary)

    @classmethod
    def two(cls, l: int, m: int, unitary) -> Gate:
        return cls((l, m), unitary)

    @property
    def kind(self) -> str:
        return "single" if len(self.lines) == 1 else "two"

    @cached_property
    def block_rotation(self) -> np.ndarray:
        """3x3 or 6x6 rotation acting on the gate's generator block."""
        if self.kind == "single":
            return spinmap.su2_to_so3(self.unitary)
        return spinmap.su4_to_so6(self.unitary)

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        return self.lines == other.lines and np.array_equal(self.unitary, other.unitary)

    def __hash__(self):
        return hash((self.lines, self.unitary.tobytes()))


@dataclass(frozen=True, eq=False)
class Circuit:
    n: int
    gates: tuple[Gate, ...] = ()
    initial: ProductState | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a circuit needs at least one line")
        gates = tuple(self.gates)
        for g in gates:
            if max(g.lines) > self.n:
                raise IndexError(f"gate on lines {g.lines} exceeds n={self.n}")
        initial = self.initial if self.initial is not None else ProductState.zeros(2 * self.n)
        if initial.num_qubits != 2 * self.n:
            raise ValueError(f"initial state has {initial.num_qubits} qubits, expected {2 * self.n}")
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "initial", initial)

    @property
    def num_qubits(self) -> int:
        return 2 * self.n

    def auxiliaries_computational(self) -> bool:
        return all(self.initial.is_computational(2 * k - 1) for k in range(1, self.n + 1))

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.n == other.n and self.gates == other.gates and self.initial == other.initial


def compile(circuit: Circuit) -> np.ndarray:
    """Total rotation; gates listed first act first, so later gates multiply on the left."""
    r = np.eye(3 * circuit.n)
    for g in circuit.gates:
        idx = spinmap.block_indices(g.lines)
        r[idx, :] = g.block_rotation @ r[idx, :]
    return r


def _rows(k: int, n: int) -> tuple[int, int, int]:
    if not 1 <= k <= n:
        raise IndexError(f"line {k} out of range 1..{n}")
    base = 3 * (k - 1)
    return base, base + 1, base + 2


def _to_probs(z: float, tol: float = TOL_COMPOSE) -> tuple[float, float]:
    if abs(z) > 1 + 2 * tol:
        raise ConsistencyError(f"<Z> = {z} outside [-1, 1]")
    p0 = min(1.0, max(0.0, (1 + z) / 2))
    return p0, 1.0 - p0


def _real(value: complex, what: str, tol: float = TOL_COMPOSE) -> float:
    if abs(value.imag) > tol:
        raise ConsistencyError(f"{what} has imaginary residue {value.imag:.3g}")
    return float(value.real)


def mu_tensor(state: ProductState) -> np.ndarray:
    """``mu[a, b] = <state| i e_a e_b |state>`` in plain generator indexing.

    Reshape to ``(n, 3, n, 3)`` for the ``[k'-1, j'-1, k''-1, j''-1]`` view.
    """
    n = state.num_qubits // 2
    gens = pauli.line_generators(n)
    out = np.empty((3 * n, 3 * n), dtype=complex)
    for a, ea in enumerate(gens):
        iea = ea.scaled(1)
        for b, eb in enumerate(gens):
            out[a, b] = expectation(iea * eb, state)
    return out


def z_even_general(r: np.ndarray, state: ProductState, k: int, mu: np.ndarray | None = None) -> float:
    n = state.num_qubits // 2
    r1, r2, _ = _rows(k, n)
    mu = mu_tensor(state) if mu is None else mu
    value = EVEN_SIGN * (r[r1] @ mu @ r[r2])
    return _real(complex(value), f"<Z_{2 * k}>")


def z_even_fast(r: np.ndarray, state: ProductState, k: int | None = None) -> float | np.ndarray:
    """O(n) evaluation valid when every auxiliary qubit starts in |0> or |1>.

    Only same-line terms survive; they reduce to the Bloch vector of each
    primary qubit dotted with the cross product of the two relevant row blocks.
    Passing ``k=None`` evaluates all lines at once.
    """
    n = state.num_qubits // 2
    for l in range(1, n + 1):
        if not state.is_computational(2 * l - 1):
            raise FastPathUnavailable(f"auxiliary qubit {2 * l - 1} is not |0> or |1>")
    bloch = state.bloch[1::2, 1:].real  # primary qubits, (n, 3)
    blocks = np.asarray(r).reshape(n, 3, n, 3)
    if k is None:
        u, v = blocks[:, 0], blocks[:, 1]  # (n_meas, n, 3)
        return -EVEN_SIGN * np.einsum("mkj,kj->m", np.cross(u, v), bloch)
    _rows(k, n)
    u, v = blocks[k - 1, 0], blocks[k - 1, 1]
    return float(-EVEN_SIGN * np.sum(np.cross(u, v) * bloch))


def odd_tensor(state: ProductState, k: int) -> np.ndarray:
    """``T[a, b, c] = <state| i e_0 e_a e_b e_c |state>`` for line ``k``."""
    n = state.num_qubits // 2
    gens = pauli.line_generators(n)
    head = pauli.generator_zero(k, n).scaled(1)
    size = 3 * n
    out = np.zeros((size, size, size), dtype=complex)
    for a, ea in enumerate(gens):
        pa = head * ea
        for b, eb in enumerate(gens):
            pab = pa * eb
            for c, ec in enumerate(gens):
                out[a, b, c] = expectation(pab * ec, state)
    return out


def z_odd(r: np.ndarray, state: ProductState, k: int, tensor: np.ndarray | None = None) -> float:
    n = state.num_qubits // 2
    r1, r2, r3 = _rows(k, n)
    t = odd_tensor(state, k) if tensor is None else tensor
    value = ODD_SIGN * np.einsum("a,b,c,abc->", r[r1], r[r2], r[r3], t)
    return _real(complex(value), f"<Z_{2 * k - 1}>")


def measure_even(circuit: Circuit, r: np.ndarray, k: int, method: str = "auto") -> tuple[float, float]:
    """Z-basis probabilities of primary qubit ``2k``.

    ``method`` is ``"auto"`` (fast path when admissible), ``"fast"`` or ``"general"``.
    """
    if method == "fast" or (method == "auto" and circuit.auxiliaries_computational()):
        return _to_probs(z_even_fast(r, circuit.initial, k))
    if method not in ("auto", "general"):
        raise ValueError(f"unknown method {method!r}")
    return _to_probs(z_even_general(r, circuit.initial, k))


def measure_odd(circuit: Circuit, r: np.ndarray, k: int) -> tuple[float, float]:
    """Z-basis probabilities of auxiliary qubit ``2k - 1``."""
    return _to_probs(z_odd(r, circuit.initial, k))


@dataclass
class MeasurementReport:
    n: int
    probabilities: dict[int, tuple[float, float]] = field(default_factory=dict)
    methods: dict[int, str] = field(default_factory=dict)
    diagnostics: dict[str, float] = field(default_factory=dict)
    timing: dict[str, float] = field(default_factory=dict)

    def p0(self, qubit: int) -> float:
        return self.probabilities[qubit][0]

    def to_dict(self) -> dict:
        return {
            "lines": self.n,
            "qubits": [
                {"qubit": q, "p0": p[0], "p1": p[1], "method": self.methods.get(q, "")}
                for q, p in sorted(self.probabilities.items())
            ],
            "diagnostics": dict(self.diagnostics),
            "timing": dict(self.timing),
        }


def select_qubits(selection: str | int | Iterable[int] | None, n: int) -> list[int]:
    """Resolve ``all`` / ``even`` / ``odd`` / a qubit number into 1-based qubit indices."""
    if selection is None or selection == "all":
        return list(range(1, 2 * n + 1))
    if selection == "even":
        return list(range(2, 2 * n + 1, 2))
    if selection == "odd":
        return list(range(1, 2 * n + 1, 2))
    if isinstance(selection, str):
        selection = int(selection)
    qubits = [selection] if isinstance(selection, (int, np.integer)) else list(selection)
    for q in qubits:
        if not 1 <= q <= 2 * n:
            raise IndexError(f"qubit {q} out of range 1..{2 * n}")
    return [int(q) for q in qubits]


def simulate(circuit: Circuit, qubits=None, even_method: str = "auto") -> MeasurementReport:
    """Compile once, then report single-qubit marginals for the requested qubits."""
    n = circuit.n
    targets = select_qubits(qubits, n)
    t0 = time.perf_counter()
    r = compile(circuit)
    t1 = time.perf_counter()
    report = MeasurementReport(n)
    report.diagnostics.update(spinmap.rotation_diagnostics(r))
    state = circuit.initial
    fast = even_method != "general" and circuit.auxiliaries_computational()
    if even_method == "fast" and not fast:
        raise FastPathUnavailable("auxiliary qubits are not all |0> or |1>")
    even = [q for q in targets if q % 2 == 0]
    if even and fast:
        zs = z_even_fast(r, state)
        for q in even:
            report.probabilities[q] = _to_probs(float(zs[q // 2 - 1]))
            report.methods[q] = "fast-path"
    elif even:
        mu = mu_tensor(state)
        for q in even:
            report.probabilities[q] = _to_probs(z_even_general(r, state, q // 2, mu))
            report.methods[q] = "general"
    for q in targets:
        if q % 2:
            report.probabilities[q] = _to_probs(z_odd(r, state, (q + 1) // 2))
            report.methods[q] = "general"
    t2 = time.perf_counter()
    report.timing = {"compile_s": t1 - t0, "measure_s": t2 - t1}
    return report


def random_circuit(
    n: int,
    num_gates: int,
    rng: np.random.Generator,
    two_line_fraction: float = 0.6,
    primary: str = "random",
    auxiliary: str = "computational",
) -> Circuit:
    """Random circuit with Haar gates on random lines.

    ``primary`` is ``"zero"`` or ``"random"``; ``auxiliary`` is ``"zero"``,
    ``"computational"`` (random |0>/|1>) or ``"random"``.
    """
    from .linalg import random_qubit_state, random_unitary

    gates = []
    for _ in range(num_gates):
        if n >= 2 and rng.random() < two_line_fraction:
            l, m = sorted(int(x) for x in rng.choice(n, size=2, replace=False) + 1)
            gates.append(Gate.two(l, m, random_unitary(4, rng)))
        else:
            gates.append(Gate.single(int(rng.integers(1, n + 1)), random_unitary(2, rng)))
    zero, one = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)
    qubits = []
    for q in range(1, 2 * n + 1):
        mode = primary if q % 2 == 0 else auxiliary
        if mode == "zero":
            qubits.append(zero)
        elif mode == "computational":
            qubits.append(one if rng.random() < 0.5 else zero)
        elif mode == "random":
            qubits.append(random_qubit_state(rng))
        else:
            raise ValueError(f"unknown state mode {mode!r}")
    return Circuit(n, tuple(gates), ProductState(tuple(qubits)))
