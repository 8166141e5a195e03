"""Single-photon scattering off a waveguide-coupled emitter.

Everything physical is carried by the reflection coefficient

    r = -1 / (1 + 1/P - 2i * detuning),   t = 1 + r,

with ``P`` the Purcell factor (waveguide over free-space decay) and
``detuning`` the photon-emitter detuning in units of the waveguide decay
rate.  The error-detected union built around an emitter keeps only the
branch where the heralding detector stays dark; on that branch the photon
polarization and the emitter (in the ``|+>``/``|->`` basis) are both flipped
and the amplitude picks up ``-r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError
from .state import NORM_TOL, HybridState


@dataclass(frozen=True)
class ScatteringParams:
    """Operating point: Purcell factor and dimensionless detuning."""

    purcell: float
    detuning: float = 0.0

    def __post_init__(self):
        p, dt = self.purcell, self.detuning
        if not (isinstance(p, (int, float, np.floating)) and math.isfinite(p) and p > 0):
            raise DomainError(f"purcell must be finite and > 0, got {p!r}")
        if not (isinstance(dt, (int, float, np.floating)) and math.isfinite(dt)):
            raise DomainError(f"detuning must be finite, got {dt!r}")


@dataclass(frozen=True)
class ReflectionCoefficients:
    r: complex
    t: complex

    @property
    def loss(self) -> float:
        """Probability scattered out of the waveguide, ``1 - |r|^2 - |t|^2``."""
        return 1.0 - abs(self.r) ** 2 - abs(self.t) ** 2


def reflection_coefficient(params: ScatteringParams) -> ReflectionCoefficients:
    r = -1.0 / complex(1.0 + 1.0 / params.purcell, -2.0 * params.detuning)
    return ReflectionCoefficients(r=r, t=r + 1.0)


def union_scatter(state: HybridState, emitter: str, path: str, r: complex) -> HybridState:
    """Heralded-success action of the error-detected union on one path.

    Components with the photon on ``path`` get factor ``-r``, a flipped
    polarization and a flipped ``emitter`` (``|+> <-> |->``).  This is
    ``r * sigma_z`` in the ``g+/g-`` basis, i.e. ``+r`` on ``|g+>`` and
    ``-r`` on ``|g->``.  Other paths are untouched.
    """
    lay = state.layout
    p = lay.path_index(path)
    mask = lay.emitter_mask(emitter)
    t = state.tensor
    out = t.copy()
    cols = np.arange(t.shape[2])
    # pol flip swaps the two rows of the path slice; emitter flip permutes columns
    out[:, p, :] = -r * t[::-1, p, :][:, cols ^ mask]
    return state.with_amplitudes(out)


def heralded_failure_probability(state: HybridState) -> float:
    """Weight lost to detector clicks, ``1 - <state|state>``."""
    n2 = state.norm_sq()
    if n2 > 1.0 + NORM_TOL:
        raise ConsistencyError(f"state norm^2 {n2!r} exceeds 1")
    return max(0.0, 1.0 - n2)
