"""Joint photon-emitter amplitude vectors.

Basis ordering is fixed: polarization (slowest), then photon path, then the
emitter bitstring with the first declared emitter as the most significant
bit.  Emitters are stored in the ``|+>``/``|->`` basis (bit 0 is ``|+>``);
``|g+>`` and ``|g->`` initial states are expanded into that basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConsistencyError, LayoutError, SchemeError

POLARIZATIONS = ("H", "V")
NORM_TOL = 1e-12
DUMP_CUTOFF = 1e-14

_SQRT_HALF = 1.0 / np.sqrt(2.0)
# single-emitter kets in the (+, -) storage basis
_EMITTER_KETS = {
    "+": np.array([1.0, 0.0], dtype=complex),
    "-": np.array([0.0, 1.0], dtype=complex),
    # |g-> = (|+> + |->)/sqrt2,  |g+> = (|+> - |->)/sqrt2
    "g-": np.array([_SQRT_HALF, _SQRT_HALF], dtype=complex),
    "g+": np.array([_SQRT_HALF, -_SQRT_HALF], dtype=complex),
}


@dataclass(frozen=True)
class RegisterLayout:
    """Names of the photon paths and emitters, in basis order."""

    path_names: tuple[str, ...]
    emitters: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "path_names", tuple(self.path_names))
        object.__setattr__(self, "emitters", tuple(self.emitters))
        if not self.path_names:
            raise LayoutError("layout needs at least one path")
        names = self.path_names + self.emitters
        if len(set(names)) != len(names):
            raise LayoutError(f"duplicate register names in {names}")

    @property
    def n_paths(self) -> int:
        return len(self.path_names)

    @property
    def n_emitters(self) -> int:
        return len(self.emitters)

    @property
    def dim(self) -> int:
        return 2 * self.n_paths * 2 ** self.n_emitters

    @property
    def shape(self) -> tuple[int, int, int]:
        return (2, self.n_paths, 2 ** self.n_emitters)

    def path_index(self, path: str) -> int:
        try:
            return self.path_names.index(path)
        except ValueError:
            raise LayoutError(f"unknown path {path!r}") from None

    def emitter_index(self, emitter: str) -> int:
        try:
            return self.emitters.index(emitter)
        except ValueError:
            raise LayoutError(f"unknown emitter {emitter!r}") from None

    def emitter_mask(self, emitter: str) -> int:
        """Bit mask of ``emitter`` inside the emitter bitstring."""
        return 1 << (self.n_emitters - 1 - self.emitter_index(emitter))

    def index(self, pol: int, path: int, bits: int) -> int:
        if pol not in (0, 1) or not 0 <= path < self.n_paths or not 0 <= bits < 2 ** self.n_emitters:
            raise LayoutError(f"basis label out of range: ({pol}, {path}, {bits})")
        return (pol * self.n_paths + path) * 2 ** self.n_emitters + bits

    def decode(self, index: int) -> tuple[int, int, int]:
        if not 0 <= index < self.dim:
            raise LayoutError(f"basis index {index} out of range")
        rest, bits = divmod(index, 2 ** self.n_emitters)
        pol, path = divmod(rest, self.n_paths)
        return pol, path, bits

    @cached_property
    def coords(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-index (pol, path, bits) arrays, used by vectorized predicates."""
        idx = np.arange(self.dim)
        rest, bits = np.divmod(idx, 2 ** self.n_emitters)
        pol, path = np.divmod(rest, self.n_paths)
        return pol, path, bits

    def bitstring(self, bits: int) -> str:
        return "".join(
            "-" if bits >> (self.n_emitters - 1 - i) & 1 else "+" for i in range(self.n_emitters)
        )


@dataclass(frozen=True, eq=False)
class HybridState:
    """Dense amplitude vector over a :class:`RegisterLayout`.

    The vector may be sub-normalized: the missing weight is the probability
    that a heralding detector clicked.  Instances are treated as immutable;
    every operation returns a new state.
    """

    layout: RegisterLayout
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.layout.dim:
            raise LayoutError(
                f"amplitude vector has length {amps.size}, layout needs {self.layout.dim}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def tensor(self) -> np.ndarray:
        """View as an array of shape ``(2, n_paths, 2**n_emitters)``."""
        return self.amplitudes.reshape(self.layout.shape)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def check_norm(self) -> float:
        n2 = self.norm_sq()
        if n2 > 1.0 + NORM_TOL:
            raise ConsistencyError(f"state norm^2 {n2!r} exceeds 1")
        return n2

    def normalized(self) -> "HybridState":
        n2 = self.norm_sq()
        if n2 <= 0.0:
            raise ConsistencyError("cannot normalize a zero state")
        return self.with_amplitudes(self.amplitudes / np.sqrt(n2))

    def with_amplitudes(self, amps) -> "HybridState":
        return HybridState(self.layout, amps)

    def __add__(self, other: "HybridState") -> "HybridState":
        _same_layout(self, other)
        return self.with_amplitudes(self.amplitudes + other.amplitudes)

    def __mul__(self, scalar) -> "HybridState":
        return self.with_amplitudes(self.amplitudes * scalar)

    __rmul__ = __mul__

    def amplitude(self, pol: str, path: str, emitters: str = "") -> complex:
        """Amplitude of the basis ket labelled e.g. ``("V", "a1", "+-")``."""
        lay = self.layout
        if len(emitters) != lay.n_emitters:
            raise LayoutError(f"expected {lay.n_emitters} emitter labels, got {emitters!r}")
        bits = 0
        for ch in emitters:
            if ch not in "+-":
                raise LayoutError(f"bad emitter label {ch!r}")
            bits = (bits << 1) | (ch == "-")
        return complex(self.amplitudes[lay.index(_pol_bit(pol), lay.path_index(path), bits)])

    def to_records(self, cutoff: float = DUMP_CUTOFF) -> list[dict]:
        """JSON-ready dump, sorted by basis index, tiny amplitudes omitted."""
        lay = self.layout
        out = []
        for i in np.flatnonzero(np.abs(self.amplitudes) >= cutoff):
            pol, path, bits = lay.decode(int(i))
            a = self.amplitudes[i]
            out.append({
                "pol": POLARIZATIONS[pol],
                "path": lay.path_names[path],
                "emitters": lay.bitstring(bits),
                "re": float(a.real),
                "im": float(a.imag),
            })
        return out

    @classmethod
    def from_records(cls, layout: RegisterLayout, records: Sequence[Mapping]) -> "HybridState":
        amps = np.zeros(layout.dim, dtype=complex)
        for rec in records:
            bits = 0
            for ch in rec["emitters"]:
                bits = (bits << 1) | (ch in "-−")
            i = layout.index(_pol_bit(rec["pol"]), layout.path_index(rec["path"]), bits)
            amps[i] += complex(rec["re"], rec["im"])
        return cls(layout, amps)


def _pol_bit(pol) -> int:
    if pol in (0, 1):
        return int(pol)
    try:
        return POLARIZATIONS.index(pol)
    except ValueError:
        raise LayoutError(f"unknown polarization {pol!r}") from None


def _same_layout(s1: HybridState, s2: HybridState) -> None:
    if s1.layout != s2.layout:
        raise LayoutError("states live on different register layouts")


def new_state(layout: RegisterLayout, pol: str = "HV", path: str | None = None,
              emitter_init: Mapping[str, str] | Sequence[str] | str | None = None) -> HybridState:
    """Unit-norm product state.

    ``pol`` is ``"H"``, ``"V"`` or ``"HV"`` for ``(|H> + |V>)/sqrt2``.  The
    photon starts on ``path`` (default: first path).  ``emitter_init`` gives
    each emitter one of ``"+"``, ``"-"``, ``"g+"``, ``"g-"``; missing entries
    default to ``"+"``.
    """
    path = layout.path_names[0] if path is None else path
    p = layout.path_index(path)
    if pol == "HV":
        pol_vec = np.array([_SQRT_HALF, _SQRT_HALF], dtype=complex)
    else:
        pol_vec = np.zeros(2, dtype=complex)
        pol_vec[_pol_bit(pol)] = 1.0
    path_vec = np.zeros(layout.n_paths, dtype=complex)
    path_vec[p] = 1.0

    if emitter_init is None:
        inits = ["+"] * layout.n_emitters
    elif isinstance(emitter_init, Mapping):
        for name in emitter_init:
            layout.emitter_index(name)
        inits = [emitter_init.get(e, "+") for e in layout.emitters]
    else:
        inits = list(emitter_init)
        if len(inits) != layout.n_emitters:
            raise LayoutError(f"expected {layout.n_emitters} emitter states, got {len(inits)}")

    vec = np.kron(pol_vec, path_vec)
    for label in inits:
        try:
            vec = np.kron(vec, _EMITTER_KETS[label])
        except KeyError:
            raise LayoutError(f"unknown emitter state {label!r}") from None
    return HybridState(layout, vec)


def inner_product(s1: HybridState, s2: HybridState) -> complex:
    """``<s1|s2>``, conjugate-linear in ``s1``."""
    _same_layout(s1, s2)
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))


Predicate = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def map_component(state: HybridState, where: Predicate | None = None, factor: complex = 1.0, *,
                  flip_pol: bool = False, flip_emitters: Sequence[str] = (),
                  to_path: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None) -> HybridState:
    """Apply a componentwise linear map to the selected basis components.

    ``where(pol, path, bits)`` receives index arrays and returns a boolean
    mask (``None`` selects everything).  Each selected component is scaled
    by ``factor``, optionally has its polarization and the listed emitter
    bits flipped, and is optionally moved to ``to_path(pol, path)``.
    Unselected components are left alone.  Components landing on the same
    index add up, so the map stays linear.
    """
    lay = state.layout
    pol, path, bits = lay.coords
    mask = np.ones(lay.dim, dtype=bool) if where is None else np.asarray(where(pol, path, bits), dtype=bool)
    src = np.flatnonzero(mask)

    flip_bits = 0
    for e in flip_emitters:
        flip_bits ^= lay.emitter_mask(e)
    new_pol = pol[src] ^ 1 if flip_pol else pol[src]
    new_path = path[src] if to_path is None else np.asarray(to_path(pol[src], path[src]), dtype=int)
    if np.any((new_path < 0) | (new_path >= lay.n_paths)):
        raise LayoutError("path remap points outside the layout")
    dest = (new_pol * lay.n_paths + new_path) * 2 ** lay.n_emitters + (bits[src] ^ flip_bits)

    amps = state.amplitudes.copy()
    amps[src] = 0.0
    np.add.at(amps, dest, factor * state.amplitudes[src])
    return state.with_amplitudes(amps)


@dataclass(frozen=True)
class QuditEncoding:
    """Maps qudit levels onto photon modes and emitter registers.

    The photon qudit uses the first ``d/2`` paths: level ``l`` sits on
    polarization ``l // (d/2)`` (H = 0) and path ``l % (d/2)``.  Each further
    qudit uses ``log2(d)`` emitters whose ``+``/``-`` labels spell the level
    in binary, most significant emitter first.
    """

    d: int
    photon_paths: tuple[str, ...]
    emitter_groups: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self):
        check_dimension(self.d)
        object.__setattr__(self, "photon_paths", tuple(self.photon_paths))
        object.__setattr__(self, "emitter_groups", tuple(tuple(g) for g in self.emitter_groups))
        if len(self.photon_paths) != self.d // 2:
            raise SchemeError(f"d={self.d} needs {self.d // 2} photon paths")
        for g in self.emitter_groups:
            if len(g) != self.bits_per_qudit:
                raise SchemeError(f"each stationary qudit needs {self.bits_per_qudit} emitters")

    @classmethod
    def for_layout(cls, layout: RegisterLayout, d: int, n: int) -> "QuditEncoding":
        """Encoding on the first ``d/2`` paths and first ``(n-1) log2 d`` emitters."""
        check_dimension(d)
        k = d.bit_length() - 1
        if layout.n_paths < d // 2 or layout.n_emitters < (n - 1) * k:
            raise SchemeError(f"layout too small for d={d}, n={n}")
        groups = [layout.emitters[j * k:(j + 1) * k] for j in range(n - 1)]
        return cls(d, layout.path_names[: d // 2], tuple(groups))

    @property
    def bits_per_qudit(self) -> int:
        return self.d.bit_length() - 1

    @property
    def n_qudits(self) -> int:
        return 1 + len(self.emitter_groups)

    def photon_mode(self, level: int) -> tuple[int, str]:
        """(pol bit, path name) holding photon level ``level``."""
        if not 0 <= level < self.d:
            raise SchemeError(f"level {level} outside 0..{self.d - 1}")
        pol, k = divmod(level, self.d // 2)
        return pol, self.photon_paths[k]

    def photon_level(self, pol: int, path: str) -> int:
        return _pol_bit(pol) * (self.d // 2) + self.photon_paths.index(path)

    def emitter_labels(self, level: int) -> str:
        """``+``/``-`` string for one stationary qudit at ``level``."""
        if not 0 <= level < self.d:
            raise SchemeError(f"level {level} outside 0..{self.d - 1}")
        k = self.bits_per_qudit
        return "".join("-" if level >> (k - 1 - i) & 1 else "+" for i in range(k))

    def emitter_level(self, labels: str) -> int:
        level = 0
        for ch in labels:
            level = (level << 1) | (ch == "-")
        return level

    def basis_index(self, layout: RegisterLayout, levels: Sequence[int]) -> int:
        """Flat index of ``|l1>|l2>...|ln>``; unlisted emitters sit in ``|+>``."""
        if len(levels) != self.n_qudits:
            raise SchemeError(f"expected {self.n_qudits} levels, got {len(levels)}")
        pol, path = self.photon_mode(levels[0])
        bits = 0
        for group, level in zip(self.emitter_groups, levels[1:]):
            for name, ch in zip(group, self.emitter_labels(level)):
                if ch == "-":
                    bits |= layout.emitter_mask(name)
        return layout.index(pol, layout.path_index(path), bits)

    def state_from_levels(self, layout: RegisterLayout, terms: Mapping[tuple[int, ...], complex]) -> HybridState:
        amps = np.zeros(layout.dim, dtype=complex)
        for levels, c in terms.items():
            amps[self.basis_index(layout, levels)] += c
        return HybridState(layout, amps)


def check_dimension(d: int) -> None:
    if not isinstance(d, (int, np.integer)) or d < 4 or d & (d - 1):
        raise SchemeError("d must be a power of two ≥ 4")
