"""Command-line entry point.

Exit codes: 0 success, 1 invalid input, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import netlist, sweep, verify
from .errors import QuditWGError
from .metrics import MetricsReport
from .scattering import ScatteringParams, reflection_coefficient
from .schemes import (SchemeSpec, apply_x_gate, apply_z_gate, generate_entangled,
                      ideal_state, scheme_layout)

EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default; 2 is reserved for verification failures
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _physics(p: argparse.ArgumentParser) -> None:
    p.add_argument("--purcell", type=float, default=40.0, help="Purcell factor P (default 40)")
    p.add_argument("--detuning", type=float, default=0.0, help="detuning in units of gamma_1D (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quditwg", description="Heralded high-dimensional photon-emitter entanglement simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="generate |phi_k b..b> and report metrics")
    g.add_argument("--d", type=int, default=4)
    g.add_argument("--n", type=int, default=2)
    g.add_argument("--b", type=int, default=0)
    g.add_argument("--k", type=int, default=0, help="phase index (Z^k on the photon, d=4)")
    g.add_argument("--ideal", action="store_true", help="dump the target state instead of simulating")
    g.add_argument("--out", help="write JSON here instead of stdout")
    _physics(g)

    t = sub.add_parser("gate", help="apply a single-qudit gate and report gate metrics (d=4)")
    t.add_argument("--target-qudit", type=int, required=True)
    t.add_argument("--m", type=int, required=True, help="gate power")
    t.add_argument("--op", choices=("x", "z"), default="x", help="X acts on qudit >= 3, Z on qudit 1")
    t.add_argument("--n", type=int, default=3)
    t.add_argument("--input", choices=("ideal", "generated"), default="ideal")
    t.add_argument("--out")
    _physics(t)

    s = sub.add_parser("sweep", help="fidelity/efficiency map over (P, detuning)")
    s.add_argument("--scheme", default="gen-d4-n2-b0")
    s.add_argument("--out", help="output file (default: stdout)")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--purcell-min", type=float, default=1.0)
    s.add_argument("--purcell-max", type=float, default=100.0)
    s.add_argument("--purcell-points", type=int, default=40)
    s.add_argument("--detuning-min", type=float, default=0.0)
    s.add_argument("--detuning-max", type=float, default=0.2)
    s.add_argument("--detuning-points", type=int, default=41)
    s.add_argument("--workers", type=int, default=1)

    v = sub.add_parser("verify", help="run the built-in invariant suite")
    v.add_argument("--suite", choices=verify.SUITES, default="all")

    r = sub.add_parser("run", help="execute a netlist file")
    r.add_argument("netlist")
    r.add_argument("--out")
    _physics(r)
    return parser


def _dump(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _params_block(params: ScatteringParams) -> dict:
    r = reflection_coefficient(params).r
    return {"purcell": params.purcell, "detuning": params.detuning, "r": [r.real, r.imag]}


def _spec_block(spec: SchemeSpec) -> dict:
    return {"d": spec.d, "n": spec.n, "k": spec.k, "q": list(spec.shifts)}


def cmd_generate(args) -> int:
    spec = SchemeSpec(args.d, args.n, b=args.b, k=args.k)
    params = ScatteringParams(args.purcell, args.detuning)
    ideal = ideal_state(spec)
    if args.ideal:
        state = ideal
    else:
        state = generate_entangled(SchemeSpec(spec.d, spec.n, b=spec.b), params)
        if spec.k:
            state = apply_z_gate(state, spec.k)
    payload = {"target": _spec_block(spec), "ideal": args.ideal}
    if not args.ideal:
        payload["params"] = _params_block(params)
    payload["state"] = state.to_records()
    payload["metrics"] = MetricsReport.evaluate(state, ideal).to_dict()
    _dump(payload, args.out)
    return EXIT_OK


def cmd_gate(args) -> int:
    params = ScatteringParams(args.purcell, args.detuning)
    n, j, m = args.n, args.target_qudit, args.m % 4
    if not 1 <= j <= n:
        raise QuditWGError(f"target qudit must be between 1 and n={n}")
    base = SchemeSpec(4, n)
    state = ideal_state(base) if args.input == "ideal" else generate_entangled(base, params)
    if args.op == "z":
        if j != 1:
            raise QuditWGError("Z gates act on qudit 1 (the photon)")
        out = apply_z_gate(state, m)
        target = SchemeSpec(4, n, k=m)
    else:
        out = apply_x_gate(state, j, m, params)
        shifts = [0] * (n - 1)
        shifts[j - 2] = m
        target = SchemeSpec(4, n, shifts=tuple(shifts))
    payload = {"gate": {"op": args.op.upper(), "m": m, "target_qudit": j, "input": args.input},
               "target": _spec_block(target), "params": _params_block(params),
               "state": out.to_records(),
               "metrics": MetricsReport.evaluate(out, ideal_state(target, out.layout)).to_dict()}
    _dump(payload, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.purcell_points < 1 or args.detuning_points < 1:
        raise QuditWGError("grid point counts must be positive")
    if args.purcell_min <= 0:
        raise QuditWGError("Purcell factors must be positive")
    purcell = np.geomspace(args.purcell_min, args.purcell_max, args.purcell_points)
    detuning = np.linspace(args.detuning_min, args.detuning_max, args.detuning_points)
    grid = sweep.SweepGrid(tuple(purcell), tuple(detuning), args.scheme)
    rows = sweep.run_sweep(grid, workers=args.workers)
    sweep.emit(rows, args.format, args.out or sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify.run_verify(args.suite)
    sys.stdout.write(report.text())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_run(args) -> int:
    doc = netlist.load(args.netlist)
    params = ScatteringParams(args.purcell, args.detuning)
    result = netlist.execute(doc, params)
    payload = {"netlist": Path(args.netlist).name, "params": _params_block(params),
               "state": result.state.to_records(),
               "measures": [{"target": _spec_block(spec), "metrics": rep.to_dict()}
                            for spec, rep in zip(doc.measures, result.reports)]}
    _dump(payload, args.out)
    return EXIT_OK


_COMMANDS = {"generate": cmd_generate, "gate": cmd_gate, "sweep": cmd_sweep,
             "verify": cmd_verify, "run": cmd_run}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (QuditWGError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
