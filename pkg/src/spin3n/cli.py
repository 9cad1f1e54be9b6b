"""Command-line front end.

Exit status: 0 on success, 1 when ``verify`` finds a discrepancy, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import circuitio, clifford, oracle, simulator, spinmap
from .clifford import blade_indices, popcount
from .linalg import TOL_COMPOSE, NotUnitaryError
from .simulator import simulate

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load(path: str) -> simulator.Circuit:
    try:
        return circuitio.load_circuit(path)
    except (OSError, circuitio.CircuitFormatError) as exc:
        raise InputError(str(exc)) from exc


def _run(circuit, mode: str, measure) -> simulator.MeasurementReport:
    try:
        if mode == "dense":
            t0 = time.perf_counter()
            report = oracle.run_dense(circuit, measure)
            report.timing["dense_s"] = time.perf_counter() - t0
            return report
        return simulate(circuit, measure)
    except (oracle.OracleLimitError, IndexError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def cmd_simulate(args) -> int:
    circuit = _load(args.circuit)
    report = _run(circuit, args.mode, args.measure)
    doc = report.to_dict()
    doc["mode"] = args.mode
    _emit(doc, args.out)
    return EXIT_OK


def _discrepancy(a: simulator.MeasurementReport, b: simulator.MeasurementReport) -> float:
    return max((abs(a.probabilities[q][0] - b.probabilities[q][0]) for q in a.probabilities), default=0.0)


def cmd_verify(args) -> int:
    if args.circuit:
        circuits = [(args.circuit, _load(args.circuit))]
    else:
        if args.random <= 0:
            raise InputError("give a circuit file or --random COUNT")
        rng = np.random.default_rng(args.seed)
        circuits = [
            (f"random[{i}]", simulator.random_circuit(args.lines, args.gates, rng, auxiliary=args.auxiliary))
            for i in range(args.random)
        ]
    rows, worst = [], 0.0
    for name, c in circuits:
        fast = _run(c, "rotation", args.measure)
        dense = _run(c, "dense", args.measure)
        d = _discrepancy(fast, dense)
        worst = max(worst, d)
        rows.append({"circuit": name, "lines": c.n, "gates": len(c.gates), "max_discrepancy": d,
                     "passed": d <= args.tol})
    passed = worst <= args.tol
    doc = {"tolerance": args.tol, "max_discrepancy": worst, "passed": passed}
    if len(rows) == 1:
        doc.update(rotation=fast.to_dict(), dense=dense.to_dict())
    else:
        doc["circuits"] = rows
    _emit(doc, args.out)
    return EXIT_OK if passed else EXIT_MISMATCH


def _blade_name(mask: int) -> str:
    return "".join(f"e{i}" for i in blade_indices(mask)) or "1"


def cmd_convert(args) -> int:
    try:
        u = circuitio.load_matrix(args.matrix)
        if u.shape != (4, 4):
            raise InputError(f"expected a 4x4 gate, got {u.shape}")
        spin = spinmap.su4_to_spin6(u)
        rot = spinmap.spin6_to_so6(spin)
    except (OSError, circuitio.CircuitFormatError, NotUnitaryError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    even_masks = sorted((m for m in range(64) if popcount(m) % 2 == 0), key=lambda m: (popcount(m), m))
    coeffs = [{"blade": _blade_name(m), "coefficient": spin.value.terms.get(m, 0.0)} for m in even_masks]
    doc = {"spin6": coeffs, "so6": np.round(rot, 15).tolist(), "diagnostics": spinmap.rotation_diagnostics(rot)}
    _emit(doc, args.out)
    return EXIT_OK


def cmd_lie_dim(args) -> int:
    n = args.n
    if not 1 <= n <= 6:
        raise InputError("lie-dim supports n = 1..6")
    t0 = time.perf_counter()
    spin_dim = clifford.bivector_closure_dim(clifford.gate_bivectors(n, args.topology), 3 * n)
    doc = {
        "n": n,
        "spin_closure_dim": spin_dim,
        "spin_formula": 3 * n * (3 * n - 1) // 2,
        "su_formula": 4**n - 1,
        "su_closure_dim": oracle.su_closure_dim(n) if n <= 3 else None,
        "topology": args.topology,
        "elapsed_s": time.perf_counter() - t0,
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    rng = np.random.default_rng(args.seed)
    t0 = time.perf_counter()
    c = simulator.random_circuit(args.lines, args.gates, rng, primary="zero", auxiliary="zero")
    t1 = time.perf_counter()
    report = simulate(c, args.measure)
    doc = {
        "lines": args.lines,
        "gates": args.gates,
        "seed": args.seed,
        "build_s": t1 - t0,
        "timing": report.timing,
        "diagnostics": report.diagnostics,
        "within_tolerance": report.diagnostics["orthogonality_residual"] < args.tol,
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_random(args) -> int:
    rng = np.random.default_rng(args.seed)
    c = simulator.random_circuit(args.lines, args.gates, rng, primary=args.primary, auxiliary=args.auxiliary)
    doc = circuitio.circuit_to_dict(c)
    _emit(doc, args.out)
    return EXIT_OK


def _measure(text: str):
    if text in ("all", "even", "odd"):
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected all, even, odd or a qubit number") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spin3n", description="Polynomial-time simulation of Spin(3n) circuits.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, measure=True):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--tol", type=float, default=TOL_COMPOSE)
        sp.add_argument("--seed", type=int, default=0)
        if measure:
            sp.add_argument("--measure", type=_measure, default="all")

    sp = sub.add_parser("simulate", help="simulate a circuit file")
    sp.add_argument("circuit")
    sp.add_argument("--mode", choices=("rotation", "dense"), default="rotation")
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="compare the rotation engine with dense simulation")
    sp.add_argument("circuit", nargs="?")
    sp.add_argument("--random", type=int, default=0, metavar="COUNT")
    sp.add_argument("--lines", type=int, default=3)
    sp.add_argument("--gates", type=int, default=20)
    sp.add_argument("--auxiliary", choices=("zero", "computational", "random"), default="computational")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("convert", help="map a 4x4 gate to Spin(6) and SO(6)")
    sp.add_argument("matrix")
    common(sp, measure=False)
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("lie-dim", help="Lie closure dimensions for n lines")
    sp.add_argument("n", type=int)
    sp.add_argument("--topology", choices=("chain", "all"), default="chain")
    common(sp, measure=False)
    sp.set_defaults(func=cmd_lie_dim)

    sp = sub.add_parser("bench", help="time compile + measurement on a random circuit")
    sp.add_argument("--lines", type=int, default=200)
    sp.add_argument("--gates", type=int, default=2000)
    common(sp)
    sp.set_defaults(func=cmd_bench, measure="even")

    sp = sub.add_parser("random", help="write a random circuit file")
    sp.add_argument("--lines", type=int, default=3)
    sp.add_argument("--gates", type=int, default=20)
    sp.add_argument("--primary", choices=("zero", "random"), default="random")
    sp.add_argument("--auxiliary", choices=("zero", "computational", "random"), default="computational")
    common(sp, measure=False)
    sp.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
