"""Fidelity / efficiency maps over (Purcell factor, detuning) grids.

Scheme identifiers:

``gen-d{d}-n{n}-b{b}[-k{k}]``
    direct generation of ``|phi_0b..b>`` (``-k`` adds a Z^k gate, d = 4)
``t2-k{k}-p{p}-q{q}``
    three-qudit target reached via generation, X^(q-p) and Z^k
``xgate-m{m}``
    X^m on qudit 3 applied to the ideal ``|phi_000>`` (gate metrics)
"""

from __future__ import annotations

import csv
import io
import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import SchemeError
from .metrics import efficiency, fidelity
from .scattering import ScatteringParams, heralded_failure_probability
from .schemes import (SchemeSpec, apply_x_gate, apply_z_gate, compose_table2,
                      generate_entangled, ideal_state, table2_target)

FIELDS = ("scheme", "d", "n", "k", "q", "purcell", "detuning",
          "fidelity", "efficiency", "herald_failure")

_GEN = re.compile(r"gen-d(\d+)-n(\d+)-b(\d+)(?:-k(\d+))?\Z")
_T2 = re.compile(r"t2-k(\d)-p(\d)-q(\d)\Z")
_XG = re.compile(r"xgate-m(\d)\Z")


@dataclass(frozen=True)
class Scheme:
    """A named realistic-vs-ideal pair evaluated at each grid point."""

    id: str

    def __post_init__(self):
        self.target  # validates the id

    @property
    def target(self) -> SchemeSpec:
        if m := _GEN.match(self.id):
            d, n, b, k = (int(g) if g is not None else 0 for g in m.groups())
            if k and d != 4:
                raise SchemeError("phase gates are only built for d=4")
            return SchemeSpec(d, n, b=b, k=k)
        if m := _T2.match(self.id):
            return table2_target(*(int(g) for g in m.groups()))
        if m := _XG.match(self.id):
            return SchemeSpec(4, 3, shifts=(0, int(m.group(1))))
        raise SchemeError(f"unknown scheme id {self.id!r}")

    def realistic(self, params):
        if _GEN.match(self.id):
            spec = self.target
            state = generate_entangled(SchemeSpec(spec.d, spec.n, b=spec.b), params)
            return apply_z_gate(state, spec.k) if spec.k else state
        if m := _T2.match(self.id):
            return compose_table2(*(int(g) for g in m.groups()), params)
        m = _XG.match(self.id)
        return apply_x_gate(ideal_state(SchemeSpec(4, 3)), 3, int(m.group(1)), params)


@dataclass(frozen=True)
class SweepRow:
    scheme: str
    d: int
    n: int
    k: int
    q: tuple
    purcell: float
    detuning: float
    fidelity: float
    efficiency: float
    herald_failure: float


def _strictly_increasing(values) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))


@dataclass(frozen=True)
class SweepGrid:
    purcell: tuple
    detuning: tuple
    scheme: Scheme = field(default_factory=lambda: Scheme("gen-d4-n2-b0"))

    def __post_init__(self):
        object.__setattr__(self, "purcell", tuple(float(p) for p in self.purcell))
        object.__setattr__(self, "detuning", tuple(float(x) for x in self.detuning))
        if isinstance(self.scheme, str):
            object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not self.purcell or not self.detuning:
            raise SchemeError("grid axes must be non-empty")
        if not (_strictly_increasing(self.purcell) and _strictly_increasing(self.detuning)):
            raise SchemeError("grid axes must be strictly increasing")
        if self.purcell[0] <= 0:
            raise SchemeError("Purcell factors must be positive")

    @classmethod
    def default(cls, scheme: str | Scheme = "gen-d4-n2-b0") -> "SweepGrid":
        return cls(tuple(np.geomspace(1.0, 100.0, 40)), tuple(np.linspace(0.0, 0.2, 41)), scheme)

    def points(self):
        return [(p, x) for p in self.purcell for x in self.detuning]


def evaluate_point(scheme: Scheme | str, purcell: float, detuning: float) -> SweepRow:
    scheme = Scheme(scheme) if isinstance(scheme, str) else scheme
    spec = scheme.target
    real = scheme.realistic(ScatteringParams(purcell, detuning))
    ideal = ideal_state(spec, real.layout)
    return SweepRow(scheme.id, spec.d, spec.n, spec.k, spec.shifts, purcell, detuning,
                    fidelity(real, ideal), efficiency(real, ideal),
                    heralded_failure_probability(real))


def _eval_chunk(args):
    scheme_id, pts = args
    return [evaluate_point(scheme_id, p, x) for p, x in pts]


def run_sweep(grid: SweepGrid, workers: int = 1) -> list[SweepRow]:
    """One row per grid point, Purcell-major order.

    Points are independent, so ``workers > 1`` farms chunks out to a
    process pool; the output order does not depend on it.
    """
    pts = grid.points()
    if workers <= 1 or len(pts) < 2:
        return _eval_chunk((grid.scheme.id, pts))
    chunks = [pts[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_eval_chunk, [(grid.scheme.id, c) for c in chunks]))
    rows = [None] * len(pts)
    for i, part in enumerate(parts):
        rows[i::workers] = part
    return rows


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".9g")
    if isinstance(value, tuple):
        return ";".join(str(v) for v in value)
    return str(value)


def _row_values(row: SweepRow) -> list[str]:
    return [_fmt(getattr(row, f)) for f in FIELDS]


def to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for row in rows:
        w.writerow(_row_values(row))
    return buf.getvalue()


def to_json(rows: Sequence[SweepRow]) -> str:
    out = []
    for row in rows:
        rec = asdict(row)
        rec["q"] = list(row.q)
        for key in ("purcell", "detuning", "fidelity", "efficiency", "herald_failure"):
            rec[key] = float(format(rec[key], ".9g"))
        out.append(rec)
    return json.dumps(out, indent=1) + "\n"


def emit(rows: Sequence[SweepRow], fmt: str = "csv", destination=None) -> str:
    """Serialize rows; write to ``destination`` (path or file object) if given."""
    if fmt == "csv":
        text = to_csv(rows)
    elif fmt == "json":
        text = to_json(rows)
    else:
        raise SchemeError(f"unknown format {fmt!r}")
    if destination is None:
        return text
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")
    return text


def _coerce(rec: dict) -> SweepRow:
    q = rec["q"]
    if isinstance(q, str):
        q = [int(v) for v in q.split(";") if v]
    return SweepRow(
        scheme=rec["scheme"], d=int(rec["d"]), n=int(rec["n"]), k=int(rec["k"]), q=tuple(int(v) for v in q),
        **{key: float(rec[key]) for key in ("purcell", "detuning", "fidelity", "efficiency", "herald_failure")},
    )


def read_csv(text: str) -> list[SweepRow]:
    return [_coerce(rec) for rec in csv.DictReader(io.StringIO(text))]


def read_json(text: str) -> list[SweepRow]:
    return [_coerce(rec) for rec in json.loads(text)]


def default_filename(scheme_id: str, fmt: str = "csv") -> str:
    return f"{scheme_id}_sweep.{fmt}"
