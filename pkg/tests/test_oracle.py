import itertools

import numpy as np
import pytest

from spin3n import oracle
from spin3n.linalg import TOL_COMPOSE, TOL_EXACT, random_unitary
from spin3n.pauli import generator, generator_zero
from spin3n.simulator import Circuit, Gate
from spin3n.spinmap import spin6_matrix, su4_to_spin6

KET0, KET1 = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)
UPSILON_PP = np.kron(KET0 + KET1, KET0 + 1j * KET1) / 2
UPSILON_MM = np.kron(KET0 - KET1, KET0 - 1j * KET1) / 2


def reordered(psi_e, upsilon):
    return np.kron(psi_e, upsilon).reshape(2, 2, 2, 2).transpose(2, 0, 3, 1).reshape(16)


def test_identity_gate():
    assert np.allclose(oracle.spin_gate_dense(Gate.two(1, 2, np.eye(4)), 3), np.eye(64), atol=TOL_EXACT)
    assert np.allclose(oracle.spin_gate_dense(Gate.single(2, np.eye(2)), 2), np.eye(16), atol=TOL_EXACT)


def test_dense_gate_acts_on_upsilon(rng):
    for _ in range(5):
        u = random_unitary(4, rng)
        u_norm = u / np.linalg.det(u) ** 0.25
        dense = oracle.spin_gate_dense(Gate.two(1, 2, u), 2)
        psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        psi /= np.linalg.norm(psi)
        for upsilon in (UPSILON_PP, UPSILON_MM):
            lhs, rhs = dense @ reordered(psi, upsilon), reordered(u_norm @ psi, upsilon)
            phase = np.vdot(rhs, lhs)
            assert np.max(np.abs(lhs - phase * rhs)) < TOL_COMPOSE


def test_dense_gate_matches_symbolic_image(rng):
    # oracle builds from Pauli strings, spinmap from Clifford blades
    u = random_unitary(4, rng)
    assert np.allclose(oracle.spin_gate_dense(Gate.two(1, 2, u), 2), spin6_matrix(su4_to_spin6(u)), atol=TOL_COMPOSE)


def test_distant_lines_carry_z_string():
    _, pairs = oracle._two_line_strings(1, 3, 3)
    cross = [p for p in pairs[6:]]
    assert all(p.labels[2] == "Z" for p in cross)
    assert all(p.labels[0] != "I" and p.labels[4] != "I" for p in cross)


def test_dense_gate_unitary(rng):
    for lines in ((1, 2), (1, 3), (2, 3)):
        m = oracle.spin_gate_dense(Gate.two(*lines, random_unitary(4, rng)), 3)
        assert np.max(np.abs(m @ m.conj().T - np.eye(64))) < TOL_COMPOSE


def test_run_dense_empty():
    report = oracle.run_dense(Circuit(2, ()))
    assert all(report.p0(q) == pytest.approx(1.0) for q in range(1, 5))
    assert set(report.methods.values()) == {"oracle"}


def test_run_dense_single_x():
    report = oracle.run_dense(Circuit(2, (Gate.single(1, np.array([[0, 1], [1, 0]])),)))
    assert [report.p0(q) for q in range(1, 5)] == pytest.approx([1, 0, 1, 1])


def test_oracle_limit():
    with pytest.raises(oracle.OracleLimitError):
        oracle.run_dense(Circuit(6, ()))
    with pytest.raises(oracle.OracleLimitError):
        oracle.su_closure_dim(4)


@pytest.mark.parametrize("n,dim", [(1, 3), (2, 15), (3, 63)])
def test_su_closure(n, dim):
    assert oracle.su_closure_dim(n) == dim


def test_commutator_structure_n3():
    for j, k, jp, kp in itertools.product((1, 2, 3), repeat=4):
        a = oracle.line_hamiltonian(j, 1, k, 2, 3)
        b = oracle.line_hamiltonian(jp, 2, kp, 3, 3)
        c = a @ b - b @ a
        if k != jp:
            assert not np.any(np.abs(c) > TOL_EXACT)
        else:
            target = oracle.line_hamiltonian(j, 1, kp, 3, 3)
            ratio = np.vdot(target, c) / np.vdot(target, target)
            assert abs(ratio) > 1
            assert np.max(np.abs(c - ratio * target)) < TOL_EXACT


def test_generator_completeness_n1():
    gens = [generator_zero(1, 1)] + [generator(j, 1, 1) for j in (1, 2, 3)]
    products = []
    for r in range(5):
        for subset in itertools.combinations(gens, r):
            m = np.eye(4, dtype=complex)
            for g in subset:
                m = m @ g.to_matrix()
            products.append(m.ravel())
    assert len(products) == 16
    assert np.linalg.matrix_rank(np.array(products)) == 16


def test_marginals_normalized(rng):
    from spin3n.simulator import random_circuit

    c = random_circuit(3, 10, rng)
    psi = oracle.final_state(c)
    assert abs(np.linalg.norm(psi) - 1) < TOL_COMPOSE
    for p0, p1 in oracle.marginals(psi, 6):
        assert abs(p0 + p1 - 1) < TOL_COMPOSE
