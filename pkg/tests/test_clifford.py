import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spin3n.clifford import (
    CliffordElement,
    NotInvertible,
    SignatureMismatch,
    SpinElement,
    bivector_closure_dim,
    blade_mask,
    bracket,
    gate_bivectors,
    geometric_product,
    reversal,
    versor_inverse,
)
from spin3n.linalg import TOL_COMPOSE, TOL_EXACT, random_unitary
from spin3n.pauli import line_generators
from spin3n.spinmap import su4_to_spin6

SIG3 = (1, 1, 1)
SIG4 = (1,) * 4
SIG6 = (1,) * 6


def e(sig, *idx):
    return CliffordElement.blade(sig, *idx)


def elements(m, max_terms=6):
    coeffs = st.floats(-2, 2, allow_nan=False).filter(lambda x: abs(x) > 1e-3)
    terms = st.dictionaries(st.integers(0, 2**m - 1), coeffs, max_size=max_terms)
    return terms.map(lambda t: CliffordElement((1,) * m, t))


def test_generator_squares_to_one():
    assert geometric_product(e(SIG3, 1), e(SIG3, 1)) == CliffordElement.scalar(SIG3)


def test_negative_signature_square():
    sig = (1, -1)
    assert geometric_product(e(sig, 2), e(sig, 2)) == CliffordElement.scalar(sig, -1.0)


def test_anticommutation():
    assert (e(SIG3, 1) * e(SIG3, 2) + e(SIG3, 2) * e(SIG3, 1)).is_zero()


def test_bivector_product():
    assert e(SIG3, 1, 2) * e(SIG3, 2, 3) == e(SIG3, 1, 3)


def test_blade_mask_sign():
    assert blade_mask((2, 1)) == (0b11, -1)
    assert blade_mask((3, 1, 2)) == (0b111, 1)


def test_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        geometric_product(e(SIG3, 1), e(SIG4, 1))


def test_reversal_examples():
    one = CliffordElement.scalar(SIG4, 2.5)
    assert reversal(one) == one
    assert reversal(e(SIG4, 1, 2)) == -e(SIG4, 1, 2)
    assert reversal(e(SIG4, 1, 2, 3, 4)) == e(SIG4, 1, 2, 3, 4)


def test_versor_inverse_examples():
    assert versor_inverse(CliffordElement.scalar(SIG3)) == CliffordElement.scalar(SIG3)
    assert versor_inverse(e(SIG3, 1, 2)) == -e(SIG3, 1, 2)


def test_versor_inverse_random_spin6(rng):
    for _ in range(5):
        s = su4_to_spin6(random_unitary(4, rng))
        prod = geometric_product(s.value, versor_inverse(s))
        assert prod.isclose(CliffordElement.scalar(SIG6), TOL_COMPOSE)


def test_versor_inverse_not_invertible():
    with pytest.raises(NotInvertible):
        versor_inverse(CliffordElement.zero(SIG3))


def test_spin_element_rejects_odd_and_unnormalized():
    with pytest.raises(ValueError):
        SpinElement(e(SIG3, 1))
    with pytest.raises(ValueError):
        SpinElement(CliffordElement.scalar(SIG3, 2.0))


def test_small_coefficients_pruned():
    x = CliffordElement(SIG3, {0: 1.0, 3: 1e-14})
    assert x.terms == {0: 1.0}


def test_immutable():
    x = CliffordElement.scalar(SIG3)
    with pytest.raises(AttributeError):
        x.terms = {}


@settings(max_examples=50, deadline=None)
@given(elements(4), elements(4), elements(4))
def test_associative(a, b, c):
    assert ((a * b) * c).isclose(a * (b * c), 1e-12)


@settings(max_examples=50, deadline=None)
@given(elements(5), elements(5))
def test_reversal_antiautomorphism(a, b):
    assert reversal(a * b).isclose(reversal(b) * reversal(a), 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 2).flatmap(lambda n: st.tuples(st.just(n), elements(3 * n), elements(3 * n))))
def test_matrix_homomorphism(args):
    n, a, b = args
    mats = [g.to_matrix() for g in line_generators(n)]
    lhs = (a * b).to_matrix(mats)
    rhs = a.to_matrix(mats) @ b.to_matrix(mats)
    assert np.max(np.abs(lhs - rhs), initial=0) < 1e-10


def test_bracket_of_bivectors_is_bivector(rng):
    sig = (1,) * 6
    idx = list(itertools.combinations(range(1, 7), 2))
    for _ in range(10):
        a = sum((e(sig, *p) * c for p, c in zip(idx, rng.standard_normal(15))), CliffordElement.zero(sig))
        b = sum((e(sig, *p) * c for p, c in zip(idx, rng.standard_normal(15))), CliffordElement.zero(sig))
        assert bracket(a, b).grades() <= {2}


def test_block_bracket_structure():
    # lines 1, 2, 3 own generators 1-3, 4-6, 7-9
    sig = (1,) * 9
    for j, k, jp, kp in itertools.product((1, 2, 3), repeat=4):
        c = bracket(e(sig, j, 3 + k), e(sig, 3 + jp, 6 + kp))
        if k != jp:
            assert c.is_zero()
        else:
            assert c == 2 * e(sig, j, 6 + kp)


@pytest.mark.parametrize("n,dim", [(1, 3), (2, 15), (3, 36)])
def test_closure_dimensions(n, dim):
    assert bivector_closure_dim(gate_bivectors(n), 3 * n) == dim


def test_closure_all_pairs_matches_chain():
    assert bivector_closure_dim(gate_bivectors(3, "all"), 9) == 36


def test_closure_rejects_non_bivectors():
    with pytest.raises(ValueError):
        bivector_closure_dim([e(SIG3, 1)], 3)


def test_closure_tolerates_dependent_inputs():
    assert bivector_closure_dim([e(SIG3, 1, 2), 2 * e(SIG3, 1, 2)], 3) == 1
