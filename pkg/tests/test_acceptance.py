"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` to see the lines inline; they are
also collected into the terminal summary.
"""

import gc
import itertools
import time
import tracemalloc

import numpy as np

from spin3n import oracle
from spin3n.clifford import bivector_closure_dim, gate_bivectors
from spin3n.linalg import random_special_unitary, random_unitary
from spin3n.pauli import PauliString, ProductState, generator, generator_zero, line_generators
from spin3n.simulator import (
    Circuit,
    FastPathUnavailable,
    compile,
    mu_tensor,
    random_circuit,
    simulate,
    z_even_fast,
    z_even_general,
)
from spin3n.spinmap import (
    is_rotation,
    rotation_diagnostics,
    spin6_matrix,
    spin6_to_so6,
    spin6_to_so6_trace,
    su4_to_spin6,
)

KET0, KET1 = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)
UPSILON_PP = np.kron(KET0 + KET1, KET0 + 1j * KET1) / 2
UPSILON_MM = np.kron(KET0 - KET1, KET0 - 1j * KET1) / 2


def reordered(psi_e, upsilon):
    """Physical vector with primaries (2, 4) in psi_e and auxiliaries (1, 3) in upsilon."""
    return np.kron(psi_e, upsilon).reshape(2, 2, 2, 2).transpose(2, 0, 3, 1).reshape(16)


def levi(a, b, c):
    return (a - b) * (b - c) * (c - a) / 2


def test_criterion_1_clifford_relations(record_criterion):
    t0 = time.perf_counter()
    ok = True
    for n in range(1, 5):
        identity = PauliString.identity(2 * n)
        gens = line_generators(n)
        for a, ea in enumerate(gens):
            for b, eb in enumerate(gens):
                anti = (ea * eb, eb * ea)
                if a == b:
                    ok &= anti[0] == identity
                else:
                    ok &= anti[0] == -anti[1]
        for k in range(1, n + 1):
            e0 = generator_zero(k, n)
            ok &= e0 * e0 == -identity
            others = list(gens) + [generator_zero(kp, n) for kp in range(1, n + 1) if kp != k]
            ok &= all(e0 * g == -(g * e0) for g in others)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1.0
    assert record_criterion(1, "Clifford relations, n <= 4", ok, f"{elapsed:.3f} s")


def test_criterion_2_mu_closed_form(record_criterion):
    t0 = time.perf_counter()
    ok = True
    for n in range(1, 4):
        mu = mu_tensor(ProductState.zeros(2 * n)).reshape(n, 3, n, 3)
        for kp, jp, kpp, jpp in itertools.product(range(n), range(3), range(n), range(3)):
            expected = (1j * (jp == jpp) - levi(jp, jpp, 2)) * (kp == kpp)
            ok &= mu[kp, jp, kpp, jpp] == expected
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1.0
    assert record_criterion(2, "mu closed form on |0...0>, n <= 3", ok, f"{elapsed:.3f} s")


def test_criterion_3_round_trip(record_criterion):
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        u = random_special_unitary(4, rng)
        sm = spin6_matrix(su4_to_spin6(u))
        psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        psi /= np.linalg.norm(psi)
        ab = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        ab /= np.linalg.norm(ab)
        for upsilon in (UPSILON_PP, UPSILON_MM, ab[0] * UPSILON_PP + ab[1] * UPSILON_MM):
            err = np.max(np.abs(sm @ reordered(psi, upsilon) - reordered(u @ psi, upsilon)))
            worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-8 and elapsed < 5.0
    assert record_criterion(3, "SU(4) -> Spin(6) round trip", ok, f"max error {worst:.2e}, {elapsed:.2f} s")


def test_criterion_4_rotation_validity(record_criterion):
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    orth = det = cover = paths = 0.0
    for _ in range(100):
        s = su4_to_spin6(random_unitary(4, rng))
        r = spin6_to_so6(s)
        diag = rotation_diagnostics(r)
        orth = max(orth, diag["orthogonality_residual"])
        det = max(det, abs(diag["determinant"] - 1))
        cover = max(cover, np.max(np.abs(r - spin6_to_so6(-s))))
        paths = max(paths, np.max(np.abs(r - spin6_to_so6_trace(s))))
    elapsed = time.perf_counter() - t0
    ok = max(orth, det, cover, paths) < 1e-8 and elapsed < 5.0
    detail = f"orth {orth:.1e}, det {det:.1e}, +-S {cover:.1e}, paths {paths:.1e}, {elapsed:.2f} s"
    assert record_criterion(4, "rotation validity", ok, detail)


def test_criterion_5_oracle_equivalence(record_criterion):
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(50):
        n = (2, 3, 4)[i % 3]
        c = random_circuit(n, int(rng.integers(1, 31)), rng, primary="random", auxiliary="computational")
        fast = simulate(c)
        dense = oracle.run_dense(c)
        worst = max(worst, max(abs(fast.p0(q) - dense.p0(q)) for q in range(1, 2 * n + 1)))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-8 and elapsed < 60.0
    assert record_criterion(5, "oracle equivalence, 50 circuits", ok, f"max gap {worst:.2e}, {elapsed:.1f} s")


def test_criterion_6_dimension_table(record_criterion):
    t0 = time.perf_counter()
    spin = [bivector_closure_dim(gate_bivectors(n), 3 * n) for n in range(1, 6)]
    su = [oracle.su_closure_dim(n) for n in range(1, 4)]
    elapsed = time.perf_counter() - t0
    ok = spin == [3, 15, 36, 66, 105] and su == [3, 15, 63] and elapsed < 30.0
    assert record_criterion(6, "Lie closure dimensions", ok, f"spin {spin}, su {su}, {elapsed:.1f} s")


def test_criterion_7_commutators(record_criterion):
    t0 = time.perf_counter()
    labels = "IXYZ"
    ok, checked = True, 0
    for j, k, jp, kp in itertools.product((1, 2, 3), repeat=4):
        h12 = (generator(j, 1, 3) * generator(k, 2, 3)).scaled(1).to_matrix()
        h23 = (generator(jp, 2, 3) * generator(kp, 3, 3)).scaled(1).to_matrix()
        c = h12 @ h23 - h23 @ h12
        if k != jp:
            ok &= not np.any(np.abs(c) > 1e-12)
        else:
            # sigma_j x 1 x sigma_k' on the primaries, sigma_1 x sigma_3 x sigma_2 on the auxiliaries
            target = PauliString(0, ("X", labels[j], "Z", "I", "Y", labels[kp])).to_matrix()
            ratio = np.vdot(target, c) / 64
            ok &= abs(ratio) > 1 and np.max(np.abs(c - ratio * target)) < 1e-12
        checked += 1
    elapsed = time.perf_counter() - t0
    ok &= checked == 81 and elapsed < 5.0
    assert record_criterion(7, "n=3 commutator structure", ok, f"{checked} combinations, {elapsed:.2f} s")


def _even_run(n, gates, seed):
    c = random_circuit(n, gates, np.random.default_rng(seed), primary="zero", auxiliary="zero")
    t0 = time.perf_counter()
    report = simulate(c, "even")
    return time.perf_counter() - t0, report


def _peak_bytes(n, gates, seed):
    c = random_circuit(n, gates, np.random.default_rng(seed), primary="zero", auxiliary="zero")
    gc.collect()
    tracemalloc.start()
    simulate(c, "even")
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    return peak


def test_criterion_8_scaling(record_criterion):
    t200, report = _even_run(200, 2000, 8)
    t400, _ = _even_run(400, 2000, 8)
    ratio = t400 / t200
    peak = _peak_bytes(200, 2000, 8)
    rotation_bytes = (3 * 200) ** 2 * 8
    valid = report.diagnostics["orthogonality_residual"] < 1e-8 and len(report.probabilities) == 200
    ok = valid and t200 < 60.0 and ratio <= 8.0 and peak < 8 * rotation_bytes
    detail = f"n=200 {t200:.1f} s, n=400/n=200 {ratio:.2f}x, peak {peak / 2**20:.1f} MiB ({peak / rotation_bytes:.1f}x R)"
    assert record_criterion(8, "polynomial scaling", ok, detail)


def test_criterion_9_fast_path(record_criterion):
    rng = np.random.default_rng(9)
    worst = 0.0
    for i in range(20):
        n = 2 + i % 4
        c = random_circuit(n, 25, rng, primary="random", auxiliary="computational")
        r = compile(c)
        fast = z_even_fast(r, c.initial)
        general = [z_even_general(r, c.initial, k) for k in range(1, n + 1)]
        worst = max(worst, float(np.max(np.abs(fast - general))))
    refused = 0
    for _ in range(5):
        c = random_circuit(3, 10, rng, auxiliary="random")
        try:
            z_even_fast(compile(c), c.initial)
        except FastPathUnavailable:
            refused += 1
    ok = worst < 1e-10 and refused == 5
    assert record_criterion(9, "fast path consistency", ok, f"max gap {worst:.2e}, refused {refused}/5")
