"""Gate compiler: SU(2) -> SO(3) and SU(4) -> Spin(6) -> SO(6), plus embedding into SO(3n).

Conventions
-----------
Within a two-line block the six generators are numbered 1..6: ``e_1, e_2, e_3``
belong to the first (lower-numbered) line, ``e_4, e_5, e_6`` to the second.
The first tensor factor of a 4x4 gate acts on the first line.

A Clifford element ``S`` acts on the 2n physical qubits through the generator
Pauli strings. Tags below are chosen so that, on auxiliary states fixed by the
block's aux operator, the pair ``B_J`` acts as ``i H_J`` and the pseudoscalar
``e_1 ... e_6`` acts as ``-i``. Rotations are read off as
``S^-1 e_a S = sum_b R[a, b] e_b``, i.e. row ``a`` is the Heisenberg image of
generator ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import pauli
from .clifford import CliffordElement, SpinElement, blade_mask, geometric_product, versor_inverse
from .linalg import (
    PAULI,
    TOL_COMPOSE,
    TOL_EXACT,
    NotHermitianError,
    NotUnitaryError,
    as_matrix,
    check_unitary,
    dagger,
    is_hermitian,
    phase_normalize_su2,
    phase_normalize_su4,
    tensor_product,
)

SIG3 = (1, 1, 1)
SIG6 = (1,) * 6
PSEUDOSCALAR_MASK = 0b111111

# sigma_j <-> e_{j+1} e_{j+2} (cyclic) inside one line
_LINE_PAIRS = {1: (2, 3), 2: (3, 1), 3: (1, 2)}


class RotationError(ValueError):
    pass


@dataclass(frozen=True)
class BasisEntry:
    label: str
    matrix: np.ndarray  # Hermitian 4x4 H_J
    pair: tuple[int, int] | None  # generators (a, b) with B_J = e_a e_b; None for the identity


@lru_cache(maxsize=None)
def gate_basis() -> tuple[BasisEntry, ...]:
    """The 16 Hermitian 4x4 matrices ``H_J`` with their Clifford pair tags.

    Order: identity, sigma_j x 1, 1 x sigma_j, sigma_j x sigma_k.
    """
    out = [BasisEntry("II", tensor_product(PAULI[0], PAULI[0]), None)]
    for j in (1, 2, 3):
        out.append(BasisEntry(pauli.LABELS[j] + "I", tensor_product(PAULI[j], PAULI[0]), _LINE_PAIRS[j]))
    for j in (1, 2, 3):
        a, b = _LINE_PAIRS[j]
        out.append(BasisEntry("I" + pauli.LABELS[j], tensor_product(PAULI[0], PAULI[j]), (a + 3, b + 3)))
    for j in (1, 2, 3):
        for k in (1, 2, 3):
            out.append(
                BasisEntry(pauli.LABELS[j] + pauli.LABELS[k], tensor_product(PAULI[j], PAULI[k]), (j, k + 3))
            )
    for e in out:
        e.matrix.setflags(write=False)
    return tuple(out)


def pair_element(pair: tuple[int, int], signature: Sequence[int] = SIG6) -> CliffordElement:
    return CliffordElement.blade(signature, *pair)


def pseudoscalar(signature: Sequence[int] = SIG6) -> CliffordElement:
    return CliffordElement(signature, {(1 << len(signature)) - 1: 1.0})


def _check_shape(u: np.ndarray, d: int) -> None:
    if u.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got {u.shape}")


# SU(2) -> Spin(3) / SO(3) ------------------------------------------------------


def su2_to_spin3(u) -> SpinElement:
    """Unit quaternion ``r0 + r1 e2e3 + r2 e3e1 + r3 e1e2`` for a 2x2 unitary."""
    u = check_unitary(as_matrix(u))
    _check_shape(u, 2)
    u, _ = phase_normalize_su2(u)
    r0 = np.trace(u).real / 2
    value = CliffordElement.scalar(SIG3, r0)
    for j, pair in _LINE_PAIRS.items():
        rj = (np.trace(PAULI[j] @ u) / 2j).real
        value = value + CliffordElement.blade(SIG3, *pair, coeff=rj)
    return SpinElement(value)


def su2_to_so3(u) -> np.ndarray:
    """``R[j, j'] = Re Tr(sigma_j' U^dag sigma_j U) / 2``."""
    u = check_unitary(as_matrix(u))
    _check_shape(u, 2)
    u, _ = phase_normalize_su2(u)
    ud = dagger(u)
    r = np.empty((3, 3))
    for j in (1, 2, 3):
        conj = ud @ PAULI[j] @ u
        for jp in (1, 2, 3):
            r[j - 1, jp - 1] = 0.5 * np.trace(PAULI[jp] @ conj).real
    return r


# SU(4) -> Spin(6) --------------------------------------------------------------


def su4_coefficients(u) -> np.ndarray:
    """``u_J = Tr(H_J U) / 4`` for the 16 basis matrices."""
    u = as_matrix(u)
    return np.array([np.trace(e.matrix @ u) / 4 for e in gate_basis()])


def su4_to_spin6_element(u) -> CliffordElement:
    """Clifford image of a 4x4 unitary after phase normalization (no normalization check)."""
    u = check_unitary(as_matrix(u))
    _check_shape(u, 4)
    u, _ = phase_normalize_su4(u)
    coeffs = su4_coefficients(u)
    terms: dict[int, float] = {0: coeffs[0].real}
    # Im(u_0) multiplies i, which is -pseudoscalar
    terms[PSEUDOSCALAR_MASK] = -coeffs[0].imag
    for entry, c in zip(gate_basis()[1:], coeffs[1:]):
        mask, sign = blade_mask(entry.pair)
        # Im(u_J) -> B_J ; Re(u_J) -> pseudoscalar * B_J (the complementary 4-blade)
        terms[mask] = terms.get(mask, 0.0) + sign * c.imag
        comp, csign = _pseudoscalar_times(mask)
        terms[comp] = terms.get(comp, 0.0) + sign * csign * c.real
    return CliffordElement(SIG6, terms)


@lru_cache(maxsize=None)
def _pseudoscalar_times(mask: int) -> tuple[int, int]:
    prod = geometric_product(pseudoscalar(), CliffordElement(SIG6, {mask: 1.0}))
    ((m, c),) = prod.terms.items()
    return m, int(round(c))


def su4_to_spin6(u) -> SpinElement:
    value = su4_to_spin6_element(u)
    try:
        return SpinElement(value)
    except ValueError as exc:
        raise NotUnitaryError(f"gate does not map into Spin(6): {exc}") from exc


# Spin(6) -> SO(6) --------------------------------------------------------------


def spin_to_rotation(s: SpinElement | CliffordElement, tol: float = TOL_COMPOSE) -> np.ndarray:
    """Row ``a`` holds the grade-1 coefficients of ``S^-1 e_a S``."""
    value = s.value if isinstance(s, SpinElement) else s
    sig = value.signature
    m = len(sig)
    inv = versor_inverse(value)
    r = np.zeros((m, m))
    for a in range(m):
        image = geometric_product(geometric_product(inv, CliffordElement(sig, {1 << a: 1.0})), value)
        residue = 0.0
        for mask, c in image.terms.items():
            if mask & (mask - 1) == 0 and mask:
                r[a, mask.bit_length() - 1] = c
            else:
                residue = max(residue, abs(c))
        if residue > tol:
            raise RotationError(f"conjugated generator {a + 1} has non-vector residue {residue:.3g}")
    return r


def spin6_to_so6(s: SpinElement | CliffordElement) -> np.ndarray:
    value = s.value if isinstance(s, SpinElement) else s
    if value.dim != 6:
        raise ValueError("expected an element of Cl(6)")
    return spin_to_rotation(value)


@lru_cache(maxsize=None)
def block_generator_matrices(n_lines: int = 2) -> tuple[np.ndarray, ...]:
    """Dense generator matrices of lines 1..n_lines (16x16 for two lines)."""
    out = tuple(p.to_matrix() for p in pauli.line_generators(n_lines))
    for mtx in out:
        mtx.setflags(write=False)
    return out


def spin6_matrix(s: SpinElement | CliffordElement) -> np.ndarray:
    """16x16 image of a ``Cl(6)`` element on four physical qubits."""
    value = s.value if isinstance(s, SpinElement) else s
    return value.to_matrix(block_generator_matrices(2))


def spin6_to_so6_trace(s: SpinElement | CliffordElement) -> np.ndarray:
    """Independent route: ``R[a, b] = Tr(E_b S^dag E_a S) / 16`` in the 16x16 picture."""
    sm = spin6_matrix(s)
    gens = block_generator_matrices(2)
    smd = dagger(sm)
    r = np.empty((6, 6))
    for a in range(6):
        conj = smd @ gens[a] @ sm
        for b in range(6):
            r[a, b] = np.trace(gens[b] @ conj).real / 16
    return r


def su4_to_so6(u) -> np.ndarray:
    return spin6_to_so6(su4_to_spin6(u))


# Hamiltonians ------------------------------------------------------------------


def hamiltonian_to_bivector(h) -> CliffordElement:
    """Bivector ``b`` with ``su4_to_spin6(exp(-i tau H)) = exp(tau b)`` for traceless Hermitian ``H``."""
    h = as_matrix(h)
    _check_shape(h, 4)
    if not is_hermitian(h):
        raise NotHermitianError("Hamiltonian is not Hermitian")
    if abs(np.trace(h)) >= TOL_EXACT:
        raise ValueError("Hamiltonian must be traceless; subtract Tr(H)/4 first")
    terms: dict[int, float] = {}
    for entry in gate_basis()[1:]:
        hj = np.trace(entry.matrix @ h) / 4
        if abs(hj.imag) >= TOL_EXACT:
            raise ValueError("non-real decomposition coefficient")
        mask, sign = blade_mask(entry.pair)
        # -i H_J is the image of -B_J
        terms[mask] = terms.get(mask, 0.0) - sign * hj.real
    return CliffordElement(SIG6, terms)


# embedding ---------------------------------------------------------------------


def block_indices(lines: int | Sequence[int]) -> list[int]:
    """0-based plain generator indices of the given line(s), first line first."""
    if isinstance(lines, (int, np.integer)):
        lines = (int(lines),)
    return [3 * (l - 1) + j for l in lines for j in range(3)]


def check_lines(lines: int | Sequence[int], n: int) -> tuple[int, ...]:
    if isinstance(lines, (int, np.integer)):
        lines = (int(lines),)
    lines = tuple(int(l) for l in lines)
    if len(lines) not in (1, 2):
        raise ValueError("gates act on one or two lines")
    if any(not 1 <= l <= n for l in lines):
        raise IndexError(f"line index out of range 1..{n}: {lines}")
    if len(lines) == 2 and not lines[0] < lines[1]:
        raise ValueError(f"two-line gates need l < m, got {lines}")
    return lines


def embed_rotation(rs, lines: int | Sequence[int], n: int) -> np.ndarray:
    """Place a 3x3 (one line) or 6x6 (two lines) rotation into the 3n x 3n identity."""
    lines = check_lines(lines, n)
    rs = np.asarray(rs, dtype=float)
    idx = block_indices(lines)
    if rs.shape != (len(idx), len(idx)):
        raise ValueError(f"rotation shape {rs.shape} does not match {len(lines)} line(s)")
    out = np.eye(3 * n)
    out[np.ix_(idx, idx)] = rs
    return out


def rotation_diagnostics(r: np.ndarray) -> dict[str, float]:
    r = np.asarray(r, dtype=float)
    return {
        "orthogonality_residual": float(np.max(np.abs(r.T @ r - np.eye(r.shape[0])))) if r.size else 0.0,
        "determinant": float(np.linalg.det(r)) if r.size else 1.0,
    }


def is_rotation(r: np.ndarray, tol: float = TOL_COMPOSE) -> bool:
    d = rotation_diagnostics(r)
    return d["orthogonality_residual"] < tol and abs(d["determinant"] - 1) < tol
