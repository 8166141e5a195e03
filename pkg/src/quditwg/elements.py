"""Linear-optics elements acting on a :class:`HybridState`.

Paths are logical labels.  A polarizing beam splitter transmits H and
reflects V; it is a lossless permutation with no reflection phase.  The
only lossy element is the heralded emitter union.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import scattering
from .errors import LayoutError
from .scattering import ScatteringParams, reflection_coefficient
from .state import HybridState, RegisterLayout, map_component

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
POL_FILTERS = ("H", "V", "*")


def apply_bs(state: HybridState, p1: str, p2: str) -> HybridState:
    """Balanced beam splitter ``[[1, 1], [1, -1]] / sqrt2`` on (p1, p2)."""
    lay = state.layout
    i, j = lay.path_index(p1), lay.path_index(p2)
    if i == j:
        raise LayoutError("beam splitter needs two distinct paths")
    t = state.tensor
    out = t.copy()
    out[:, i, :] = (t[:, i, :] + t[:, j, :]) * _INV_SQRT2
    out[:, j, :] = (t[:, i, :] - t[:, j, :]) * _INV_SQRT2
    return state.with_amplitudes(out)


def apply_pbs(state: HybridState, in1: str, in2: str, out1: str, out2: str) -> HybridState:
    """Polarizing beam splitter.

    H on ``in1`` exits ``out1`` and V on ``in1`` exits ``out2``; for ``in2``
    the roles swap (H to ``out2``, V to ``out1``).
    """
    lay = state.layout
    i1, i2, o1, o2 = (lay.path_index(p) for p in (in1, in2, out1, out2))
    if i1 == i2 or o1 == o2:
        raise LayoutError("PBS ports must be pairwise distinct")

    def route(pol, path):
        from_in1 = path == i1
        return np.where(from_in1 == (pol == 0), o1, o2)

    return map_component(state, lambda pol, path, bits: (path == i1) | (path == i2), to_path=route)


def apply_hwp45(state: HybridState, path: str) -> HybridState:
    """Half-wave plate at 45 degrees: swaps H and V on ``path``."""
    p = state.layout.path_index(path)
    return map_component(state, lambda pol, path_, bits: path_ == p, flip_pol=True)


def apply_phase(state: HybridState, path: str, pol_filter: str, theta: float) -> HybridState:
    """Multiply components on ``path`` (and polarization ``pol_filter``) by ``e^{i theta}``."""
    p = state.layout.path_index(path)
    if pol_filter not in POL_FILTERS:
        raise LayoutError(f"polarization filter must be one of {POL_FILTERS}, got {pol_filter!r}")
    if not math.isfinite(theta):
        raise ValueError("phase must be finite")
    want = None if pol_filter == "*" else ("H", "V").index(pol_filter)

    def where(pol, path_, bits):
        m = path_ == p
        return m if want is None else m & (pol == want)

    return map_component(state, where, np.exp(1j * theta))


@dataclass(frozen=True)
class BS:
    p1: str
    p2: str

    def apply(self, state, r):
        return apply_bs(state, self.p1, self.p2)

    def paths(self):
        return (self.p1, self.p2)


@dataclass(frozen=True)
class PBS:
    in1: str
    in2: str
    out1: str
    out2: str

    def apply(self, state, r):
        return apply_pbs(state, self.in1, self.in2, self.out1, self.out2)

    def paths(self):
        return (self.in1, self.in2, self.out1, self.out2)


@dataclass(frozen=True)
class HWP45:
    path: str

    def apply(self, state, r):
        return apply_hwp45(state, self.path)

    def paths(self):
        return (self.path,)


@dataclass(frozen=True)
class PhaseShift:
    path: str
    pol_filter: str
    theta: float

    def apply(self, state, r):
        return apply_phase(state, self.path, self.pol_filter, self.theta)

    def paths(self):
        return (self.path,)


@dataclass(frozen=True)
class EmitterUnion:
    emitter: str
    path: str

    def apply(self, state, r):
        return scattering.union_scatter(state, self.emitter, self.path, r)

    def paths(self):
        return (self.path,)


CircuitElement = Union[BS, PBS, HWP45, PhaseShift, EmitterUnion]


def validate_element(element: CircuitElement, layout: RegisterLayout) -> None:
    for p in element.paths():
        layout.path_index(p)
    if isinstance(element, EmitterUnion):
        layout.emitter_index(element.emitter)
    elif isinstance(element, PhaseShift):
        if element.pol_filter not in POL_FILTERS:
            raise LayoutError(f"bad polarization filter {element.pol_filter!r}")
        if not math.isfinite(element.theta):
            raise ValueError("phase must be finite")
    elif isinstance(element, BS) and element.p1 == element.p2:
        raise LayoutError("beam splitter needs two distinct paths")
    elif isinstance(element, PBS) and (element.in1 == element.in2 or element.out1 == element.out2):
        raise LayoutError("PBS ports must be pairwise distinct")


@dataclass(frozen=True)
class Circuit:
    layout: RegisterLayout
    elements: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        for el in self.elements:
            validate_element(el, self.layout)

    def __len__(self):
        return len(self.elements)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.layout != self.layout:
            raise LayoutError("cannot concatenate circuits on different layouts")
        return Circuit(self.layout, self.elements + other.elements)

    def union_count(self) -> int:
        return sum(isinstance(e, EmitterUnion) for e in self.elements)


def run_circuit(circuit: Circuit, params: ScatteringParams | complex | None,
                initial: HybridState) -> HybridState:
    """Apply the elements in order.

    ``params`` may be a :class:`ScatteringParams` or a reflection coefficient
    given directly (``-1`` for ideal scattering).
    """
    if initial.layout != circuit.layout:
        raise LayoutError("initial state does not match the circuit layout")
    r = resolve_r(params)
    state = initial
    for el in circuit.elements:
        state = el.apply(state, r)
    return state


def resolve_r(params) -> complex:
    if params is None:
        return -1.0 + 0j
    if isinstance(params, ScatteringParams):
        return reflection_coefficient(params).r
    return complex(params)
