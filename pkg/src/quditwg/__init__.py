"""Heralded qudit entanglement between a photon and waveguide-coupled emitters.

The photon carries one qudit in its polarization and path; every further
qudit lives in a register of two-level emitters, each side-coupled to a
one-dimensional waveguide.  All imperfection enters through the single
reflection coefficient ``r(P, detuning)``.
"""

from .errors import (ConsistencyError, DomainError, LayoutError, QuditWGError,
                     SchemeError)
from .scattering import (ReflectionCoefficients, ScatteringParams,
                         heralded_failure_probability, reflection_coefficient,
                         union_scatter)
from .state import HybridState, QuditEncoding, RegisterLayout, inner_product, new_state
from .elements import Circuit, run_circuit
from .schemes import (SchemeSpec, compose_table2, generate_entangled, ideal_state,
                      oracle_state)
from .metrics import MetricsReport, efficiency, fidelity

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "ConsistencyError",
    "DomainError",
    "HybridState",
    "LayoutError",
    "MetricsReport",
    "QuditEncoding",
    "QuditWGError",
    "ReflectionCoefficients",
    "RegisterLayout",
    "ScatteringParams",
    "SchemeError",
    "SchemeSpec",
    "compose_table2",
    "efficiency",
    "fidelity",
    "generate_entangled",
    "heralded_failure_probability",
    "ideal_state",
    "inner_product",
    "new_state",
    "oracle_state",
    "reflection_coefficient",
    "run_circuit",
    "union_scatter",
]
