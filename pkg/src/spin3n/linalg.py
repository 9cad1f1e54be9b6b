"""Small dense complex linear algebra helpers.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Everything here
is pure; inputs are never modified.
"""

from __future__ import annotations

import numpy as np

TOL_EXACT = 1e-10
TOL_COMPOSE = 1e-8

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# index 0 is the identity so that PAULI[j] is sigma_j for j = 1, 2, 3
PAULI = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)


class NotHermitianError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def tensor_product(*factors) -> np.ndarray:
    """Kronecker product; the first factor is the most significant subsystem."""
    if not factors:
        return np.ones((1, 1), dtype=complex)
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = np.kron(out, as_matrix(f))
    return out


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def unitarity_residual(u) -> float:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return float("inf")
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))))


def is_unitary(u, tol: float = TOL_EXACT) -> bool:
    return unitarity_residual(u) < tol


def is_hermitian(h, tol: float = TOL_EXACT) -> bool:
    h = as_matrix(h)
    return h.shape[0] == h.shape[1] and float(np.max(np.abs(h - dagger(h)))) < tol


def check_unitary(u, tol: float = TOL_EXACT) -> np.ndarray:
    u = as_matrix(u)
    res = unitarity_residual(u)
    if not res < tol:
        raise NotUnitaryError(f"matrix is not unitary (residual {res:.3g} >= {tol:.1g})")
    return u


def unitary_from_hamiltonian(h, tau: float) -> np.ndarray:
    """Return ``exp(-i tau H)`` for Hermitian ``H`` via its eigendecomposition."""
    h = as_matrix(h)
    if not is_hermitian(h):
        raise NotHermitianError("Hamiltonian is not Hermitian")
    # symmetrize so eigh sees an exactly Hermitian input
    evals, evecs = np.linalg.eigh(0.5 * (h + dagger(h)))
    return (evecs * np.exp(-1j * tau * evals)) @ dagger(evecs)


def _principal_root_phase(det: complex, order: int) -> complex:
    angle = float(np.angle(det))
    # numerical -pi belongs to the same branch as +pi
    if angle <= -np.pi + 1e-12:
        angle = np.pi
    return complex(np.exp(-1j * angle / order))


def phase_normalize(u, order: int | None = None) -> tuple[np.ndarray, complex]:
    """Scale a unitary by ``det(U)^(-1/d)`` (principal branch) so that det = 1.

    Returns the normalized matrix and the applied phase factor.
    """
    u = check_unitary(u)
    d = order or u.shape[0]
    phase = _principal_root_phase(complex(np.linalg.det(u)), d)
    return u * phase, phase


def phase_normalize_su4(u) -> tuple[np.ndarray, complex]:
    u = as_matrix(u)
    if u.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got {u.shape}")
    return phase_normalize(u, 4)


def phase_normalize_su2(u) -> tuple[np.ndarray, complex]:
    u = as_matrix(u)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {u.shape}")
    return phase_normalize(u, 2)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_special_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    u = random_unitary(dim, rng)
    return phase_normalize(u, dim)[0]


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (z + dagger(z))


def random_qubit_state(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return v / np.linalg.norm(v)
