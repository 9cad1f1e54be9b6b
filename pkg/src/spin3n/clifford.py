"""Sparse real Clifford algebra with bit-mask blades.

A blade is an ``int`` whose bit ``i - 1`` marks generator ``e_i``; the stored
blade is always the ascending product, and any reordering sign lives in the
coefficient. Elements are immutable.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .linalg import TOL_COMPOSE, TOL_EXACT

PIVOT_TOL = 1e-9


def popcount(x: int) -> int:
    return bin(x).count("1")


def blade_indices(mask: int) -> list[int]:
    """1-based generator indices present in ``mask``, ascending."""
    out, i = [], 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def blade_mask(indices: Iterable[int]) -> tuple[int, int]:
    """Canonicalize a product of generators; returns ``(mask, sign)``.

    Repeated generators are not allowed here; use products of elements instead.
    """
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise ValueError(f"repeated generator in {idx}")
    inversions = sum(1 for a, b in itertools.combinations(idx, 2) if a > b)
    mask = 0
    for i in idx:
        mask |= 1 << (i - 1)
    return mask, -1 if inversions % 2 else 1


@lru_cache(maxsize=1 << 20)
def _reorder_sign(a: int, b: int) -> int:
    # transpositions needed to move every generator of b past the larger ones of a
    a >>= 1
    swaps = 0
    while a:
        swaps += popcount(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=1 << 20)
def _blade_product(a: int, b: int, signature: tuple[int, ...]) -> tuple[int, int]:
    sign = _reorder_sign(a, b)
    common = a & b
    i = 0
    while common:
        if common & 1:
            sign *= signature[i]
        common >>= 1
        i += 1
    return a ^ b, sign


class SignatureMismatch(ValueError):
    pass


class CliffordElement:
    """Real linear combination of blades in ``Cl(p, q)``.

    ``signature[i]`` is the square (+1 or -1) of generator ``e_{i+1}``.
    """

    __slots__ = ("signature", "terms")

    def __init__(self, signature: Sequence[int], terms: Mapping[int, float] | None = None, tol: float = TOL_EXACT):
        sig = tuple(int(s) for s in signature)
        if any(s not in (1, -1) for s in sig):
            raise ValueError("signature entries must be +1 or -1")
        limit = 1 << len(sig)
        clean = {}
        for mask, c in (terms or {}).items():
            if not 0 <= mask < limit:
                raise ValueError(f"blade {mask:#b} outside {len(sig)} generators")
            c = float(c)
            if abs(c) >= tol:
                clean[int(mask)] = c
        object.__setattr__(self, "signature", sig)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("CliffordElement is immutable")

    # construction -----------------------------------------------------------

    @classmethod
    def scalar(cls, signature: Sequence[int], value: float = 1.0) -> CliffordElement:
        return cls(signature, {0: value})

    @classmethod
    def zero(cls, signature: Sequence[int]) -> CliffordElement:
        return cls(signature, {})

    @classmethod
    def blade(cls, signature: Sequence[int], *indices: int, coeff: float = 1.0) -> CliffordElement:
        """Product ``e_{i1} e_{i2} ...`` of distinct generators (any order)."""
        m = len(signature)
        if any(not 1 <= i <= m for i in indices):
            raise IndexError(f"generator index out of range 1..{m}: {indices}")
        mask, sign = blade_mask(indices)
        return cls(signature, {mask: sign * coeff})

    @classmethod
    def vector(cls, signature: Sequence[int], coords: Sequence[float]) -> CliffordElement:
        return cls(signature, {1 << i: c for i, c in enumerate(coords)})

    # basic properties -------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.signature)

    def grades(self) -> set[int]:
        return {popcount(m) for m in self.terms}

    def grade(self, g: int) -> CliffordElement:
        return CliffordElement(self.signature, {m: c for m, c in self.terms.items() if popcount(m) == g})

    def is_even(self) -> bool:
        return all(popcount(m) % 2 == 0 for m in self.terms)

    def scalar_part(self) -> float:
        return self.terms.get(0, 0.0)

    def coefficient(self, *indices: int) -> float:
        """Coefficient of the (possibly unordered) product of the given generators."""
        mask, sign = blade_mask(indices)
        return sign * self.terms.get(mask, 0.0)

    def norm_max(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def is_zero(self, tol: float = TOL_EXACT) -> bool:
        return self.norm_max() < tol

    def isclose(self, other: CliffordElement, tol: float = TOL_COMPOSE) -> bool:
        return (self - other).norm_max() < tol

    # arithmetic -------------------------------------------------------------

    def _check(self, other: CliffordElement) -> None:
        if self.signature != other.signature:
            raise SignatureMismatch(f"signatures differ: {self.signature} vs {other.signature}")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = CliffordElement.scalar(self.signature, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0.0) + c
        return CliffordElement(self.signature, out)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElement(self.signature, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return geometric_product(self, other)
        return CliffordElement(self.signature, {m: c * other for m, c in self.terms.items()})

    def __rmul__(self, other):
        return CliffordElement(self.signature, {m: c * other for m, c in self.terms.items()})

    def __truediv__(self, other: float):
        return self * (1.0 / other)

    def __eq__(self, other):
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return self.signature == other.signature and self.terms == other.terms

    def __hash__(self):
        return hash((self.signature, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda x: (popcount(x), x)):
            name = "".join(f"e{i}" for i in blade_indices(m)) or "1"
            parts.append(f"{self.terms[m]:+.6g}*{name}")
        return " ".join(parts)

    def to_matrix(self, generator_matrices: Sequence[np.ndarray]) -> np.ndarray:
        """Image under the representation sending ``e_i`` to ``generator_matrices[i-1]``."""
        if len(generator_matrices) != self.dim:
            raise ValueError("need one matrix per generator")
        size = np.asarray(generator_matrices[0]).shape[0]
        out = np.zeros((size, size), dtype=complex)
        for mask, c in self.terms.items():
            blade = np.eye(size, dtype=complex)
            for i in blade_indices(mask):
                blade = blade @ generator_matrices[i - 1]
            out += c * blade
        return out


def geometric_product(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    a._check(b)
    sig = a.signature
    out: dict[int, float] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            m, s = _blade_product(ma, mb, sig)
            out[m] = out.get(m, 0.0) + s * ca * cb
    return CliffordElement(sig, out)


def reversal(a: CliffordElement) -> CliffordElement:
    """Reverse the factor order of every blade: grade g picks up ``(-1)^(g(g-1)/2)``."""
    out = {}
    for m, c in a.terms.items():
        g = popcount(m)
        out[m] = -c if (g * (g - 1) // 2) % 2 else c
    return CliffordElement(a.signature, out)


def bracket(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    return geometric_product(a, b) - geometric_product(b, a)


class NotInvertible(ValueError):
    pass


class SpinElement:
    """Even, versor-normalized Clifford element (``S * reversal(S) = 1``)."""

    __slots__ = ("value",)

    def __init__(self, value: CliffordElement, tol: float = TOL_COMPOSE):
        if not value.is_even():
            raise ValueError("spin elements must be even")
        norm = geometric_product(value, reversal(value))
        if not (norm - 1.0).is_zero(tol):
            raise ValueError(f"element is not versor-normalized: S~S = {norm!r}")
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("SpinElement is immutable")

    @property
    def signature(self) -> tuple[int, ...]:
        return self.value.signature

    def __mul__(self, other: SpinElement) -> SpinElement:
        return SpinElement(geometric_product(self.value, other.value))

    def __neg__(self) -> SpinElement:
        return SpinElement(-self.value)

    def inverse(self) -> SpinElement:
        return SpinElement(versor_inverse(self.value))

    def __repr__(self):
        return f"SpinElement({self.value!r})"


def versor_inverse(s: CliffordElement | SpinElement) -> CliffordElement:
    """``reversal(S) / lambda`` where ``S * reversal(S) = lambda`` is a scalar."""
    if isinstance(s, SpinElement):
        s = s.value
    rev = reversal(s)
    norm = geometric_product(s, rev)
    lam = norm.scalar_part()
    if abs(lam) <= TOL_EXACT:
        raise NotInvertible("S * reversal(S) vanishes")
    if not (norm - lam).is_zero(TOL_COMPOSE * max(1.0, abs(lam))):
        raise NotInvertible(f"S * reversal(S) is not a scalar: {norm!r}")
    return rev / lam


# Lie closure of bivectors ----------------------------------------------------


def _bivector_index(m: int) -> dict[int, int]:
    masks = [(1 << i) | (1 << j) for i in range(m) for j in range(i + 1, m)]
    return {mask: pos for pos, mask in enumerate(masks)}


def bivector_coordinates(a: CliffordElement, index: Mapping[int, int] | None = None) -> np.ndarray:
    index = index or _bivector_index(a.dim)
    out = np.zeros(len(index))
    for mask, c in a.terms.items():
        if mask not in index:
            raise ValueError("element has components outside grade 2")
        out[index[mask]] = c
    return out


class _Span:
    """Incremental Gram-Schmidt basis."""

    def __init__(self, tol: float = PIVOT_TOL):
        self.tol = tol
        self.basis: list[np.ndarray] = []

    def add(self, v: np.ndarray) -> bool:
        scale = np.linalg.norm(v)
        if scale < self.tol:
            return False
        w = v / scale
        for _ in range(2):  # re-orthogonalize once for stability
            for b in self.basis:
                w = w - np.dot(b, w) * b
        r = np.linalg.norm(w)
        if r < self.tol:
            return False
        self.basis.append(w / r)
        return True


def bivector_closure_dim(generators: Sequence[CliffordElement], m: int | None = None) -> int:
    """Dimension of the Lie algebra generated by ``generators`` under ``[a, b] = ab - ba``.

    New directions are bracketed against the generators only; right-nested
    brackets already span the generated algebra.
    """
    if not generators:
        return 0
    m = m if m is not None else generators[0].dim
    index = _bivector_index(m)
    span = _Span()
    frontier = []
    for g in generators:
        if g.dim != m:
            raise ValueError("generator has the wrong number of generators")
        if g.grades() - {2}:
            raise ValueError("closure inputs must be pure bivectors")
        if span.add(bivector_coordinates(g, index)):
            frontier.append(g)
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = bracket(g, x)
                if y.is_zero():
                    continue
                if span.add(bivector_coordinates(y, index)):
                    nxt.append(y)
        frontier = nxt
    return len(span.basis)


def line_pairs(n: int, topology: str = "chain") -> list[tuple[int, int]]:
    if topology == "chain":
        return [(l, l + 1) for l in range(1, n)]
    if topology == "all":
        return [(l, m) for l in range(1, n + 1) for m in range(l + 1, n + 1)]
    raise ValueError(f"unknown topology {topology!r}")


def gate_bivectors(n: int, topology: str = "chain") -> list[CliffordElement]:
    """Bivectors generating one-line gates on every line and two-line gates on the given pairs."""
    sig = (1,) * (3 * n)
    out = []
    for l in range(1, n + 1):
        base = 3 * (l - 1)
        for j, k in ((2, 3), (3, 1), (1, 2)):
            out.append(CliffordElement.blade(sig, base + j, base + k))
    for l, m in line_pairs(n, topology):
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                out.append(CliffordElement.blade(sig, 3 * (l - 1) + j, 3 * (m - 1) + k))
    return out
