"""Brute-force statevector reference for small circuits (n <= 5 lines).

Two-line gates are expanded into generator Pauli strings directly from the
trace coefficients ``u_J = Tr(H_J U) / 4``; nothing here goes through the
symbolic Clifford kernel or the rotation matrices.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import pauli
from .linalg import PAULI, TOL_COMPOSE, as_matrix, phase_normalize_su4, tensor_product, unitarity_residual
from .pauli import PauliString, generator

MAX_LINES = 5

_CYCLIC = {1: (2, 3), 2: (3, 1), 3: (1, 2)}


class OracleLimitError(ValueError):
    pass


def _check_n(n: int, limit: int = MAX_LINES) -> None:
    if not 1 <= n <= limit:
        raise OracleLimitError(f"dense oracle supports 1..{limit} lines, got {n}")


def _prod(strings) -> PauliString:
    out = None
    for s in strings:
        out = s if out is None else out * s
    return out


@lru_cache(maxsize=None)
def _two_line_strings(l: int, m: int, n: int) -> tuple[PauliString, tuple[PauliString, ...]]:
    """(pseudoscalar string, pair strings B_J for J = 1..15) of the block (l, m).

    B_J is ordered like the 4x4 basis: sigma_j x 1, 1 x sigma_j, sigma_j x sigma_k.
    """
    pseudo = _prod(generator(j, line, n) for line in (l, m) for j in (1, 2, 3))
    pairs = []
    for line in (l, m):
        for j in (1, 2, 3):
            a, b = _CYCLIC[j]
            pairs.append(generator(a, line, n) * generator(b, line, n))
    for j, k in itertools.product((1, 2, 3), repeat=2):
        pairs.append(generator(j, l, n) * generator(k, m, n))
    return pseudo, tuple(pairs)


def _basis_4x4():
    yield tensor_product(PAULI[0], PAULI[0])
    for j in (1, 2, 3):
        yield tensor_product(PAULI[j], PAULI[0])
    for j in (1, 2, 3):
        yield tensor_product(PAULI[0], PAULI[j])
    for j, k in itertools.product((1, 2, 3), repeat=2):
        yield tensor_product(PAULI[j], PAULI[k])


def _single_qubit_operator(u: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    left = np.eye(2 ** (qubit - 1))
    right = np.eye(2 ** (num_qubits - qubit))
    return np.kron(np.kron(left, u), right)


def spin_gate_dense(gate, n: int) -> np.ndarray:
    """Full ``4^n x 4^n`` matrix of a one- or two-line gate."""
    _check_n(n)
    lines = gate.lines
    u = as_matrix(gate.unitary)
    if len(lines) == 1:
        return _single_qubit_operator(u, 2 * lines[0], 2 * n)
    l, m = lines
    u, _ = phase_normalize_su4(u)
    coeffs = [np.trace(h @ u) / 4 for h in _basis_4x4()]
    pseudo, pairs = _two_line_strings(l, m, n)
    dim = 4**n
    out = coeffs[0].real * np.eye(dim, dtype=complex)
    # the complex unit is carried by -pseudo; H_J by pseudo * B_J
    out -= coeffs[0].imag * pseudo.to_matrix()
    for c, pair in zip(coeffs[1:], pairs):
        out += c.imag * pair.to_matrix()
        out += c.real * (pseudo * pair).to_matrix()
    res = unitarity_residual(out)
    if res > TOL_COMPOSE:
        raise ArithmeticError(f"dense gate image is not unitary (residual {res:.3g})")
    return out


def final_state(circuit) -> np.ndarray:
    _check_n(circuit.n)
    psi = circuit.initial.to_vector()
    for g in circuit.gates:
        psi = spin_gate_dense(g, circuit.n) @ psi
    return psi


def marginals(psi: np.ndarray, num_qubits: int) -> list[tuple[float, float]]:
    probs = np.abs(psi.reshape((2,) * num_qubits)) ** 2
    out = []
    for q in range(num_qubits):
        axes = tuple(a for a in range(num_qubits) if a != q)
        p = probs.sum(axis=axes)
        out.append((float(p[0]), float(p[1])))
    return out


def run_dense(circuit, qubits=None):
    """Exact single-qubit marginals from full statevector simulation."""
    from .simulator import MeasurementReport, select_qubits

    psi = final_state(circuit)
    norm = float(np.linalg.norm(psi))
    margs = marginals(psi, circuit.num_qubits)
    report = MeasurementReport(circuit.n)
    for q in select_qubits(qubits, circuit.n):
        report.probabilities[q] = margs[q - 1]
        report.methods[q] = "oracle"
    report.diagnostics["norm_residual"] = abs(norm - 1.0)
    return report


def line_hamiltonian(j: int, l: int, k: int, m: int, n: int) -> np.ndarray:
    """Dense ``i e_j^[l] e_k^[m]``."""
    return (generator(j, l, n) * generator(k, m, n)).scaled(1).to_matrix()


# Lie closure over anti-Hermitian matrices -------------------------------------------


def _coords(a: np.ndarray) -> np.ndarray:
    return np.concatenate([a.real.ravel(), a.imag.ravel()])


def matrix_closure_dim(generators, tol: float = 1e-9) -> int:
    """Dimension of the real Lie algebra generated by the given matrices."""
    basis: list[np.ndarray] = []

    def add(x: np.ndarray) -> bool:
        v = _coords(x)
        scale = np.linalg.norm(v)
        if scale < tol:
            return False
        v = v / scale
        for _ in range(2):
            for b in basis:
                v = v - np.dot(b, v) * b
        r = np.linalg.norm(v)
        if r < tol:
            return False
        basis.append(v / r)
        return True

    gens = [np.asarray(g, dtype=complex) for g in generators]
    frontier = [g for g in gens if add(g)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g @ x - x @ g
                if add(y):
                    nxt.append(y)
        frontier = nxt
    return len(basis)


def su_generators(n: int) -> list[np.ndarray]:
    """``i sigma_j`` on each qubit and ``i sigma_j sigma_k`` on each qubit pair of n qubits."""
    out = []
    for q in range(1, n + 1):
        for j in (1, 2, 3):
            labels = ["I"] * n
            labels[q - 1] = pauli.LABELS[j]
            out.append(PauliString(1, tuple(labels)).to_matrix())
    for q, r in itertools.combinations(range(1, n + 1), 2):
        for j, k in itertools.product((1, 2, 3), repeat=2):
            labels = ["I"] * n
            labels[q - 1] = pauli.LABELS[j]
            labels[r - 1] = pauli.LABELS[k]
            out.append(PauliString(1, tuple(labels)).to_matrix())
    return out


def su_closure_dim(n: int) -> int:
    _check_n(n, 3)
    return matrix_closure_dim(su_generators(n))
