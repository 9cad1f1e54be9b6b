"""JSON circuit files.

Schema (1-based indices, complex numbers as ``[re, im]``)::

    {
      "lines": 2,
      "initial": [{"qubit": 2, "state": [[0.6, 0], [0.8, 0]]}],
      "gates": [
        {"kind": "single", "line": 1, "unitary": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
        {"kind": "two", "lines": [1, 2], "unitary": [... 4x4 ...]}
      ]
    }

Unspecified qubits start in |0>. Unknown keys are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .linalg import TOL_EXACT
from .pauli import ProductState
from .simulator import Circuit, Gate


class CircuitFormatError(ValueError):
    pass


_TOP_KEYS = {"lines", "initial", "gates"}
_GATE_KEYS = {"single": {"kind", "line", "unitary"}, "two": {"kind", "lines", "unitary"}}


def _complex(x, where: str) -> complex:
    if not (isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x)):
        raise CircuitFormatError(f"{where}: complex numbers must be [re, im] pairs, got {x!r}")
    return complex(float(x[0]), float(x[1]))


def _matrix(rows, d: int, where: str) -> np.ndarray:
    if not (isinstance(rows, list) and len(rows) == d and all(isinstance(r, list) and len(r) == d for r in rows)):
        raise CircuitFormatError(f"{where}: expected a {d}x{d} matrix of [re, im] entries")
    return np.array([[_complex(v, where) for v in row] for row in rows], dtype=complex)


def _reject_unknown(obj: dict, allowed: set[str], where: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise CircuitFormatError(f"{where}: unknown field(s) {sorted(extra)}")


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise CircuitFormatError(f"{where}: expected an integer, got {x!r}")
    return x


def circuit_from_dict(data: dict) -> Circuit:
    if not isinstance(data, dict):
        raise CircuitFormatError("circuit file must hold a JSON object")
    _reject_unknown(data, _TOP_KEYS, "circuit")
    if "lines" not in data:
        raise CircuitFormatError("circuit: missing 'lines'")
    n = _int(data["lines"], "lines")
    if n < 1:
        raise CircuitFormatError("lines must be positive")
    qubits = [np.array([1, 0], dtype=complex) for _ in range(2 * n)]
    seen = set()
    for i, entry in enumerate(data.get("initial", [])):
        where = f"initial[{i}]"
        if not isinstance(entry, dict):
            raise CircuitFormatError(f"{where}: expected an object")
        _reject_unknown(entry, {"qubit", "state"}, where)
        q = _int(entry.get("qubit"), f"{where}.qubit")
        if not 1 <= q <= 2 * n or q in seen:
            raise CircuitFormatError(f"{where}: bad or repeated qubit {q}")
        seen.add(q)
        st = entry.get("state")
        if not (isinstance(st, list) and len(st) == 2):
            raise CircuitFormatError(f"{where}: state must be two [re, im] amplitudes")
        v = np.array([_complex(a, where) for a in st])
        if abs(np.linalg.norm(v) - 1) >= TOL_EXACT:
            raise CircuitFormatError(f"{where}: state is not normalized")
        qubits[q - 1] = v
    gates = []
    for i, g in enumerate(data.get("gates", [])):
        where = f"gates[{i}]"
        if not isinstance(g, dict) or g.get("kind") not in _GATE_KEYS:
            raise CircuitFormatError(f"{where}: kind must be 'single' or 'two'")
        kind = g["kind"]
        _reject_unknown(g, _GATE_KEYS[kind], where)
        try:
            if kind == "single":
                line = _int(g.get("line"), f"{where}.line")
                gates.append(Gate.single(line, _matrix(g.get("unitary"), 2, where)))
            else:
                lines = g.get("lines")
                if not (isinstance(lines, list) and len(lines) == 2):
                    raise CircuitFormatError(f"{where}: 'lines' must be a pair")
                l, m = (_int(x, f"{where}.lines") for x in lines)
                gates.append(Gate.two(l, m, _matrix(g.get("unitary"), 4, where)))
        except CircuitFormatError:
            raise
        except (ValueError, IndexError) as exc:
            raise CircuitFormatError(f"{where}: {exc}") from exc
    try:
        return Circuit(n, tuple(gates), ProductState(tuple(qubits)))
    except (ValueError, IndexError) as exc:
        raise CircuitFormatError(str(exc)) from exc


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def circuit_to_dict(circuit: Circuit) -> dict:
    initial = []
    for q, v in enumerate(circuit.initial.qubits, start=1):
        if not (v[0] == 1 and v[1] == 0):
            initial.append({"qubit": q, "state": [_pair(a) for a in v]})
    gates = []
    for g in circuit.gates:
        mat = [[_pair(z) for z in row] for row in g.unitary]
        if g.kind == "single":
            gates.append({"kind": "single", "line": g.lines[0], "unitary": mat})
        else:
            gates.append({"kind": "two", "lines": list(g.lines), "unitary": mat})
    out = {"lines": circuit.n, "gates": gates}
    if initial:
        out["initial"] = initial
    return out


def load_circuit(path: str | Path) -> Circuit:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"{path}: invalid JSON ({exc})") from exc
    return circuit_from_dict(data)


def dump_circuit(circuit: Circuit, path: str | Path) -> None:
    Path(path).write_text(json.dumps(circuit_to_dict(circuit), indent=1), encoding="utf-8")


def load_matrix(path: str | Path) -> np.ndarray:
    """A bare square matrix file (nested [re, im] arrays), or an object with a 'unitary' key."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"{path}: invalid JSON ({exc})") from exc
    if isinstance(data, dict):
        _reject_unknown(data, {"unitary"}, "matrix file")
        data = data.get("unitary")
    if not isinstance(data, list):
        raise CircuitFormatError("matrix file must hold a list of rows")
    return _matrix(data, len(data), "matrix")
