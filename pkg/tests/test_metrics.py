import numpy as np
import pytest

from quditwg import MetricsReport, RegisterLayout, SchemeSpec, efficiency, fidelity, generate_entangled, ideal_state, new_state
from quditwg.errors import ConsistencyError
from quditwg.metrics import entanglement_entropy, schmidt_spectrum

R = -40 / 41


@pytest.mark.parametrize("spec, f, e", [
    (SchemeSpec(4, 2, b=0), 0.999695, 0.952105),
    (SchemeSpec(4, 2, b=3), 0.999695, 0.952105),
    (SchemeSpec(4, 3), 0.998782, 0.907056),
])
def test_frozen_values(spec, f, e):
    real = generate_entangled(spec, R)
    assert fidelity(real, ideal_state(spec)) == pytest.approx(f, abs=1e-6)
    assert efficiency(real, ideal_state(spec)) == pytest.approx(e, abs=1e-6)


def test_closed_form_three_qudit_fidelity():
    r2 = R * R
    amps = np.array([1, r2, r2, r2 * r2]) / 2
    f = abs(amps.sum() / 2) ** 2 / np.sum(amps ** 2)
    assert fidelity(generate_entangled(SchemeSpec(4, 3), R), ideal_state(SchemeSpec(4, 3))) == pytest.approx(f, abs=1e-14)


def test_unit_states():
    s = ideal_state(SchemeSpec(4, 2))
    assert fidelity(s, s) == pytest.approx(1, abs=1e-15)
    assert efficiency(generate_entangled(SchemeSpec(4, 2), -1.0), s) == pytest.approx(1, abs=1e-14)


def test_fidelity_is_scale_invariant():
    s = ideal_state(SchemeSpec(4, 2))
    assert fidelity(s * 0.3, s) == pytest.approx(1)
    assert efficiency(s * 0.3, s) == pytest.approx(0.09)


def test_zero_state_rejected():
    s = ideal_state(SchemeSpec(4, 2))
    with pytest.raises(ConsistencyError):
        fidelity(s * 0, s)


def test_product_state_spectrum():
    s = new_state(RegisterLayout(("a1", "a2"), ("a", "b")))
    sv = schmidt_spectrum(s)
    assert sv[0] == pytest.approx(1) and np.allclose(sv[1:], 0)
    assert entanglement_entropy(s) == pytest.approx(0, abs=1e-12)


def test_maximally_entangled_spectrum():
    assert np.allclose(schmidt_spectrum(ideal_state(SchemeSpec(4, 2)))[:4], 0.5)
    assert entanglement_entropy(ideal_state(SchemeSpec(4, 2))) == pytest.approx(2.0)
    assert entanglement_entropy(ideal_state(SchemeSpec(8, 2))) == pytest.approx(3.0)


def test_realistic_two_qudit_spectrum():
    sv = schmidt_spectrum(generate_entangled(SchemeSpec(4, 2), R))[:4]
    want = np.array([1, -R, -R, R * R])
    assert np.allclose(sv, want / np.linalg.norm(want))
    # the two single-flip levels share a value
    assert len(np.unique(np.round(sv, 12))) == 3
    assert sv[0] > 0.5


def test_emitter_cut():
    s = ideal_state(SchemeSpec(4, 3))
    # photon and first stationary qudit against the second
    assert entanglement_entropy(s, cut=("c", "d")) == pytest.approx(2.0)


def test_report():
    real = generate_entangled(SchemeSpec(4, 2), R)
    rep = MetricsReport.evaluate(real, ideal_state(SchemeSpec(4, 2)))
    assert rep.herald_failure == pytest.approx(1 - real.norm_sq())
    assert set(rep.to_dict()) == {"fidelity", "efficiency", "herald_failure", "schmidt", "entropy_bits"}
