"""Fidelity, efficiency and entanglement diagnostics.

Fidelity compares the *normalized* heralded state with the target;
efficiency uses the raw heralded state, so it also charges the weight lost
to detector clicks.  With ``E = |<ideal|real>|^2`` and
``F = E / <real|real>`` we always have ``E <= F``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .errors import ConsistencyError, LayoutError
from .scattering import heralded_failure_probability
from .state import HybridState, inner_product

IDEAL_NORM_TOL = 1e-9


def _check_ideal(ideal: HybridState) -> None:
    if abs(ideal.norm_sq() - 1.0) > IDEAL_NORM_TOL:
        raise ConsistencyError("ideal state must have unit norm")


def efficiency(real_state: HybridState, ideal_state: HybridState) -> float:
    _check_ideal(ideal_state)
    return abs(inner_product(ideal_state, real_state)) ** 2


def fidelity(real_state: HybridState, ideal_state: HybridState) -> float:
    n2 = real_state.norm_sq()
    if n2 <= 0.0:
        raise ConsistencyError("real state has zero norm")
    return min(1.0, efficiency(real_state, ideal_state) / n2)


def _split_axes(state: HybridState, cut) -> tuple[list[int], list[int]]:
    lay = state.layout
    # axis 0: photon (pol x path); axis 1+i: emitter i
    if isinstance(cut, str) and cut == "photon":
        side_a = [0]
    else:
        names = [cut] if isinstance(cut, str) else list(cut)
        side_a = sorted({1 + lay.emitter_index(e) for e in names})
    side_b = [ax for ax in range(1 + lay.n_emitters) if ax not in side_a]
    if not side_a or not side_b:
        raise LayoutError("bipartition has an empty side")
    return side_a, side_b


def schmidt_spectrum(state: HybridState, cut: str | Iterable[str] = "photon") -> np.ndarray:
    """Singular values of the normalized state across ``cut``, descending.

    ``cut`` is ``"photon"`` (photon vs all emitters) or a collection of
    emitter names forming one side.
    """
    lay = state.layout
    side_a, side_b = _split_axes(state, cut)
    psi = state.normalized().amplitudes.reshape((2 * lay.n_paths,) + (2,) * lay.n_emitters)
    dims = psi.shape
    mat = np.transpose(psi, side_a + side_b).reshape(
        int(np.prod([dims[a] for a in side_a])), -1)
    return np.linalg.svd(mat, compute_uv=False)


def entanglement_entropy(state: HybridState, cut: str | Iterable[str] = "photon") -> float:
    """Von Neumann entropy of either side, in bits."""
    p = schmidt_spectrum(state, cut) ** 2
    p = p[p > 1e-300]
    return float(max(0.0, -np.sum(p * np.log2(p))))


@dataclass
class MetricsReport:
    fidelity: float
    efficiency: float
    herald_failure: float
    schmidt: list
    entropy_bits: float

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def evaluate(cls, real_state: HybridState, ideal_state: HybridState,
                 cut: str | Iterable[str] = "photon") -> "MetricsReport":
        return cls(
            fidelity=fidelity(real_state, ideal_state),
            efficiency=efficiency(real_state, ideal_state),
            herald_failure=heralded_failure_probability(real_state),
            schmidt=[float(x) for x in schmidt_spectrum(real_state, cut)],
            entropy_bits=entanglement_entropy(real_state, cut),
        )
