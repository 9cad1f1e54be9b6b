"""Classical simulation of Spin(3n) circuits on 2n qubits."""

from .clifford import CliffordElement, SpinElement, bivector_closure_dim, geometric_product, reversal, versor_inverse
from .pauli import PauliString, ProductState, expectation, generator, generator_zero, iota, jw_generator, pauli_mul
from .simulator import Circuit, Gate, MeasurementReport, compile, measure_even, measure_odd, mu_tensor, simulate
from .spinmap import embed_rotation, hamiltonian_to_bivector, spin6_to_so6, su2_to_so3, su4_to_spin6

__version__ = "0.1.0"
