"""Entanglement-generation schemes and single-qudit gates.

Every builder emits an element-level :class:`~quditwg.elements.Circuit`;
:func:`oracle_state` gives the same output in closed form so the two
routes can be checked against each other.

Layout convention for a ``(d, n)`` scheme: photon paths ``a1 .. a{d/2}``
carry the photon qudit; each gets a companion ``a{k}v`` holding the V arm
while it is split off by a PBS.  Emitters are named ``a, b, c, ...`` and
grouped ``log2(d)`` at a time per stationary qudit, most significant
first.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, field

import numpy as np

from .elements import (BS, HWP45, PBS, Circuit, EmitterUnion, PhaseShift, resolve_r,
                       run_circuit)
from .errors import SchemeError
from .scattering import ScatteringParams
from .state import HybridState, QuditEncoding, RegisterLayout, check_dimension, new_state


@dataclass(frozen=True)
class SchemeSpec:
    """Target ``(1/sqrt d) sum_l e^{2 pi i l k/d} |l>|l+q2>...|l+qn>``.

    ``shifts`` holds ``q2..qn``; when omitted every stationary qudit is
    shifted by ``b``.  After construction ``b`` always equals ``q2``.
    """

    d: int
    n: int = 2
    b: int = 0
    k: int = 0
    shifts: tuple[int, ...] | None = None

    def __post_init__(self):
        check_dimension(self.d)
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise SchemeError("n must be an integer ≥ 2")
        d = self.d
        object.__setattr__(self, "b", int(self.b) % d)
        object.__setattr__(self, "k", int(self.k) % d)
        if self.shifts is None:
            shifts = (self.b,) * (self.n - 1)
        else:
            shifts = tuple(int(q) % d for q in self.shifts)
            if len(shifts) != self.n - 1:
                raise SchemeError(f"need {self.n - 1} shifts for n={self.n}, got {len(shifts)}")
        object.__setattr__(self, "shifts", shifts)
        object.__setattr__(self, "b", shifts[0])

    @property
    def uniform(self) -> bool:
        return all(q == self.shifts[0] for q in self.shifts)

    @property
    def label(self) -> str:
        return "phi_" + "".join(str(x) for x in (self.k,) + self.shifts)


def emitter_names(count: int) -> tuple[str, ...]:
    letters = string.ascii_lowercase
    if count <= len(letters):
        return tuple(letters[:count])
    return tuple(f"e{i}" for i in range(count))


def emitter_count(d: int, n: int) -> int:
    check_dimension(d)
    return (n - 1) * (d.bit_length() - 1)


def quoted_emitter_count(d: int, n: int) -> float:
    """Resource count quoted for the general construction; agrees with
    :func:`emitter_count` only for d = 4 and d = 8."""
    return (n - 1) * (4 + d) / 4


def photon_paths(d: int) -> tuple[str, ...]:
    return tuple(f"a{k + 1}" for k in range(d // 2))


def scheme_layout(d: int, n: int) -> RegisterLayout:
    main = photon_paths(d)
    return RegisterLayout(main + tuple(p + "v" for p in main), emitter_names(emitter_count(d, n)))


def encoding_for(d: int, n: int, layout: RegisterLayout | None = None) -> QuditEncoding:
    return QuditEncoding.for_layout(layout or scheme_layout(d, n), d, n)


def initial_state(layout: RegisterLayout) -> HybridState:
    """Diagonally polarized photon on ``a1``, all emitters in ``|+>``."""
    return new_state(layout, "HV", "a1")


# ---------------------------------------------------------------------------
# ideal and closed-form states

def ideal_state(spec: SchemeSpec, layout: RegisterLayout | None = None) -> HybridState:
    d, n = spec.d, spec.n
    layout = layout or scheme_layout(d, n)
    enc = encoding_for(d, n, layout)
    terms = {}
    for l in range(d):
        levels = (l,) + tuple((l + q) % d for q in spec.shifts)
        terms[levels] = np.exp(2j * np.pi * l * spec.k / d) / math.sqrt(d)
    return enc.state_from_levels(layout, terms)


def hamming_weight(v: int) -> int:
    return bin(v).count("1")


def oracle_state(spec: SchemeSpec, r: complex | ScatteringParams | None) -> HybridState:
    """Closed-form output of :func:`generate_entangled`.

    Component ``|l>|l+b>...|l+b>`` carries ``(-r)^((n-1) w(l+b)) / sqrt d``
    where ``w`` is the binary Hamming weight.
    """
    if spec.k != 0 or not spec.uniform:
        raise SchemeError("direct generation needs k=0 and equal shifts")
    r = resolve_r(r)
    d, n, b = spec.d, spec.n, spec.shifts[0]
    layout = scheme_layout(d, n)
    enc = encoding_for(d, n, layout)
    terms = {}
    for l in range(d):
        v = (l + b) % d
        terms[(l,) + (v,) * (n - 1)] = (-r) ** ((n - 1) * hamming_weight(v)) / math.sqrt(d)
    return enc.state_from_levels(layout, terms)


# ---------------------------------------------------------------------------
# port routing

_PORT_LETTERS = ("i", "j", "s", "t")

# auxiliary wave plates named in the two-qudit figure for each routing
_AUX_HWPS_4D = {
    0: (frozenset(), frozenset()),
    1: (frozenset({"H3", "H4", "H5"}), frozenset()),
    2: (frozenset({"H6", "H7"}), frozenset()),
    3: (frozenset({"H6", "H7"}), frozenset({"H2"})),
}


def port_name(x: int, primed: bool) -> str:
    letter = _PORT_LETTERS[x] if x < len(_PORT_LETTERS) else f"u{x}"
    return f"a_{letter}'" if primed else f"a_{letter}"


@dataclass(frozen=True)
class PortAssignment:
    """Which physical input port each logical photon path feeds.

    Unprimed port ``x`` sends H through the arm for emitter value ``x`` and
    V through the arm for ``x + d/2``; a primed port adds wave plates that
    swap the two.
    """

    d: int
    b: int
    mapping: tuple[tuple[str, str], ...]
    port_index: tuple[int, ...]
    primed: tuple[bool, ...]
    hwp_flags: frozenset = field(default_factory=frozenset)
    omitted_hwps: frozenset = field(default_factory=frozenset)

    def port(self, path: str) -> str:
        return dict(self.mapping)[path]


def routing(d: int, b: int) -> PortAssignment:
    check_dimension(d)
    b = int(b) % d
    half = d // 2
    idx, primed = [], []
    for k in range(half):
        v = (k + b) % d  # emitter value reached by H on a{k+1}
        idx.append(v % half)
        primed.append(v >= half)
    mapping = tuple((p, port_name(x, pr)) for p, x, pr in zip(photon_paths(d), idx, primed))
    aux, omitted = _AUX_HWPS_4D[b] if d == 4 else (frozenset(), frozenset())
    return PortAssignment(d, b, mapping, tuple(idx), tuple(primed), aux, omitted)


# ---------------------------------------------------------------------------
# generation

def _arm_emitters(value: int, groups) -> list[str]:
    out = []
    for group in groups:
        k = len(group)
        out += [name for i, name in enumerate(group) if value >> (k - 1 - i) & 1]
    return out


def _arm(path: str, emitters: list[str]) -> list:
    els = [EmitterUnion(e, path) for e in emitters]
    if len(emitters) % 2:
        # every union flips the polarization; restore it
        els.append(HWP45(path))
    return els


def bs_tree(d: int) -> list:
    """Beam splitters spreading a photon on ``a1`` evenly over all paths."""
    paths = photon_paths(d)
    els, stride = [], len(paths) // 2
    while stride >= 1:
        for i in range(0, len(paths), 2 * stride):
            els.append(BS(paths[i], paths[i + stride]))
        stride //= 2
    return els


def generation_circuit(spec: SchemeSpec) -> Circuit:
    """Element sequence producing ``|phi_0b..b>`` from :func:`initial_state`."""
    if spec.k != 0 or not spec.uniform:
        raise SchemeError("direct generation needs k=0 and equal shifts q_j = b")
    d, n = spec.d, spec.n
    layout = scheme_layout(d, n)
    groups = encoding_for(d, n, layout).emitter_groups
    route = routing(d, spec.shifts[0])
    half = d // 2
    els = bs_tree(d)
    for path, x, primed in zip(photon_paths(d), route.port_index, route.primed):
        h_arm = _arm_emitters(x, groups)
        v_arm = _arm_emitters(x + half, groups)
        if not h_arm and not v_arm:
            continue
        vpath = path + "v"
        body = [PBS(path, vpath, path, vpath)]
        body += _arm(path, h_arm) + _arm(vpath, v_arm)
        body.append(PBS(path, vpath, path, vpath))
        if primed:
            body = [HWP45(path)] + body + [HWP45(path)]
        els += body
    return Circuit(layout, els)


def generate_entangled(spec: SchemeSpec, params: ScatteringParams | complex | None) -> HybridState:
    circuit = generation_circuit(spec)
    return run_circuit(circuit, params, initial_state(circuit.layout))


# ---------------------------------------------------------------------------
# gates

def clock_matrix(d: int, m: int = 1) -> np.ndarray:
    """``Z^m |l> = e^{2 pi i l m/d} |l>``."""
    return np.diag(np.exp(2j * np.pi * np.arange(d) * m / d))


def shift_matrix(d: int, m: int = 1) -> np.ndarray:
    """``X^m |l> = |l + m mod d>`` (column ``l`` has its 1 in row ``l+m``)."""
    return np.roll(np.eye(d, dtype=complex), m, axis=0)


def z_gate_circuit(layout: RegisterLayout, m: int, d: int = 4) -> Circuit:
    """Phase shifters realizing ``Z^m`` on the photon qudit."""
    if not 0 <= m < d:
        raise SchemeError(f"m must lie in 0..{d - 1}")
    enc = QuditEncoding.for_layout(layout, d, 1)
    els = []
    for l in range(1, d):
        theta = (2 * math.pi * l * m / d) % (2 * math.pi)
        if theta == 0.0:
            continue
        pol, path = enc.photon_mode(l)
        els.append(PhaseShift(path, "HV"[pol], theta))
    return Circuit(layout, els)


def apply_z_gate(state: HybridState, m: int, d: int = 4) -> HybridState:
    return run_circuit(z_gate_circuit(state.layout, m, d), None, state)


def _target_pair(layout: RegisterLayout, target_qudit: int) -> tuple[str, str]:
    if not isinstance(target_qudit, (int, np.integer)) or target_qudit < 3:
        raise SchemeError("X gates act on qudit 3 or later")
    lo = 2 * (target_qudit - 2)
    if lo + 2 > layout.n_emitters:
        raise SchemeError(f"layout has no emitter pair for qudit {target_qudit}")
    return layout.emitters[lo], layout.emitters[lo + 1]


def x_gate_circuit(layout: RegisterLayout, target_qudit: int, m: int, offset: int = 0) -> Circuit:
    """Photon-conditioned emitter flips realizing ``X^m`` on a 4D qudit.

    Valid on states where the target qudit sits at photon level plus
    ``offset``.  An odd offset swaps the roles of ``a1`` and ``a2``, which is
    the alternative port routing of the X / X-dagger gate.
    """
    if m not in (0, 1, 2, 3):
        raise SchemeError("m must lie in 0..3")
    high, low = _target_pair(layout, target_qudit)
    if m == 0:
        return Circuit(layout, ())
    if m == 2:
        els = [EmitterUnion(high, "a1"), HWP45("a1"), EmitterUnion(high, "a2"), HWP45("a2")]
        return Circuit(layout, els)
    # X wiring: a1 flips the low emitter, a2 flips both; X-dagger mirrors it
    x_wiring = (m == 1) == (offset % 2 == 0)
    once, twice = ("a1", "a2") if x_wiring else ("a2", "a1")
    els = [EmitterUnion(low, once), HWP45(once), EmitterUnion(high, twice), EmitterUnion(low, twice)]
    if not x_wiring:
        els = els[2:] + els[:2]
    return Circuit(layout, els)


def apply_x_gate(state: HybridState, target_qudit: int, m: int,
                 params: ScatteringParams | complex | None, offset: int = 0) -> HybridState:
    return run_circuit(x_gate_circuit(state.layout, target_qudit, m, offset), params, state)


# ---------------------------------------------------------------------------
# three-qudit table: operation reaching |phi_kpq> from |phi_0pp>

_X_NAMES = ("", "X", "X²", "X†")
_Z_NAMES = ("Z⁰", "Z", "Z²", "Z†")

_TABLE2_ROW0 = ("Z⁰ X X² X† X† Z⁰ X X² X² X† Z⁰ X X X² X† Z⁰").split()
TABLE2 = {
    (k, p, q): (op if k == 0 else (op + _Z_NAMES[k] if op != "Z⁰" else _Z_NAMES[k]))
    for k in range(4)
    for (p, q), op in zip(((p, q) for p in range(4) for q in range(4)), _TABLE2_ROW0)
}


def table2_rule(k: int, p: int, q: int) -> str:
    """Operation name from ``m = (q - p) mod 4``."""
    m = (q - p) % 4
    if m == 0:
        return _Z_NAMES[k]
    return _X_NAMES[m] + ("" if k == 0 else _Z_NAMES[k])


def _check_kpq(*vals):
    for v in vals:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < 4:
            raise SchemeError("k, p, q must lie in 0..3")


def table2_circuit(k: int, p: int, q: int) -> Circuit:
    _check_kpq(k, p, q)
    gen = generation_circuit(SchemeSpec(4, 3, b=p))
    layout = gen.layout
    return gen + x_gate_circuit(layout, 3, (q - p) % 4, offset=p) + z_gate_circuit(layout, k)


def compose_table2(k: int, p: int, q: int, params: ScatteringParams | complex | None) -> HybridState:
    """Generate ``|phi_0pp>``, shift qudit 3 by ``q - p``, then apply ``Z^k``."""
    _check_kpq(k, p, q)
    state = generate_entangled(SchemeSpec(4, 3, b=p), params)
    state = apply_x_gate(state, 3, (q - p) % 4, params, offset=p)
    return apply_z_gate(state, k)


def table2_target(k: int, p: int, q: int) -> SchemeSpec:
    _check_kpq(k, p, q)
    return SchemeSpec(4, 3, k=k, shifts=(p, q))
