"""Checked-in netlists for every figure circuit, and their builders.

Each entry pairs a netlist file name with the builder call that must
produce the same state.  ``python -m quditwg.corpus`` rewrites the files.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import netlist
from .elements import Circuit
from .schemes import (SchemeSpec, apply_z_gate, compose_table2, generate_entangled,
                      generation_circuit, table2_circuit, table2_target, z_gate_circuit)
from .state import HybridState

CORPUS_DIR = Path(__file__).with_name("corpus")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    title: str
    circuit: Callable[[], Circuit]
    target: SchemeSpec
    builder: Callable[[object], HybridState]

    @property
    def path(self) -> Path:
        return CORPUS_DIR / f"{self.name}.net"

    def document(self) -> netlist.NetlistDocument:
        return netlist.document(self.circuit(), [self.target])

    def text(self) -> str:
        return f"# {self.title}\n" + netlist.to_text(self.document())


def _gen(d, n, b, title, name):
    spec = SchemeSpec(d, n, b=b)
    return CorpusEntry(name, title, lambda: generation_circuit(spec), spec,
                       lambda params: generate_entangled(spec, params))


def _zgate(m):
    spec = SchemeSpec(4, 2)

    def circuit():
        gen = generation_circuit(spec)
        return gen + z_gate_circuit(gen.layout, m)

    return CorpusEntry(f"fig3_z{m}", f"4D two-qudit |phi_00> followed by Z^{m}", circuit,
                       SchemeSpec(4, 2, k=m),
                       lambda params: apply_z_gate(generate_entangled(spec, params), m))


def _xgate(q, name, title):
    return CorpusEntry(name, title, lambda: table2_circuit(0, 0, q), table2_target(0, 0, q),
                       lambda params: compose_table2(0, 0, q, params))


ENTRIES = (
    [_gen(4, 2, b, f"4D two-qudit generation, input routing for |phi_0{b}>", f"fig2_q{b}") for b in range(4)]
    + [_zgate(m) for m in (1, 2, 3)]
    + [_gen(4, 3, 0, "4D three-qudit generation of |phi_000>", "fig4_b0")]
    + [_xgate(1, "fig5a_x", "X gate on qudit 3 after |phi_000> generation"),
       _xgate(3, "fig5a_xdag", "X-dagger gate on qudit 3 after |phi_000> generation"),
       _xgate(2, "fig5b_x2", "X^2 gate on qudit 3 after |phi_000> generation")]
    + [_gen(4, n, 0, f"4D {n}-qudit generation", f"fig6_n{n}") for n in (4, 5)]
    + [_gen(8, 2, 0, "8D two-qudit generation of |phi_00>", "fig7b")]
)
CORPUS = {e.name: e for e in ENTRIES}


def write_corpus(directory: Path = CORPUS_DIR) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for e in ENTRIES:
        p = directory / f"{e.name}.net"
        p.write_text(e.text(), encoding="utf-8")
        out.append(p)
    return out


if __name__ == "__main__":
    for p in write_corpus():
        print(p)
