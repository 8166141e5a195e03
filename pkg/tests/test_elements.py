import math

import numpy as np
import pytest

from quditwg import Circuit, LayoutError, RegisterLayout, ScatteringParams, new_state, run_circuit
from quditwg.elements import (BS, HWP45, PBS, EmitterUnion, PhaseShift, apply_bs, apply_hwp45,
                              apply_pbs, apply_phase)
from quditwg.schemes import SchemeSpec, generation_circuit, initial_state

S = 2 ** -0.5


@pytest.fixture
def lay():
    return RegisterLayout(("p1", "p2", "o1", "o2"), ("a",))


def test_bs_from_first_port(lay):
    out = apply_bs(new_state(lay, "H", "p1"), "p1", "p2")
    assert out.amplitude("H", "p1", "+") == pytest.approx(S)
    assert out.amplitude("H", "p2", "+") == pytest.approx(S)


def test_bs_from_second_port(lay):
    out = apply_bs(new_state(lay, "H", "p2"), "p1", "p2")
    assert out.amplitude("H", "p1", "+") == pytest.approx(S)
    assert out.amplitude("H", "p2", "+") == pytest.approx(-S)


def test_bs_needs_distinct_paths(lay):
    with pytest.raises(LayoutError):
        apply_bs(new_state(lay), "p1", "p1")


@pytest.mark.parametrize("pol, path, out_pol, out_path", [
    ("H", "p1", "H", "o1"),
    ("V", "p1", "V", "o2"),
    ("H", "p2", "H", "o2"),
    ("V", "p2", "V", "o1"),
])
def test_pbs_routing(lay, pol, path, out_pol, out_path):
    out = apply_pbs(new_state(lay, pol, path), "p1", "p2", "o1", "o2")
    assert out.amplitude(out_pol, out_path, "+") == 1
    assert out.norm_sq() == 1


def test_pbs_superposition(lay):
    out = apply_pbs(new_state(lay, "HV", "p1"), "p1", "p2", "o1", "o2")
    assert out.amplitude("H", "o1", "+") == pytest.approx(S)
    assert out.amplitude("V", "o2", "+") == pytest.approx(S)


def test_pbs_ports_distinct(lay):
    with pytest.raises(LayoutError):
        apply_pbs(new_state(lay), "p1", "p1", "o1", "o2")


def test_hwp(lay):
    s = new_state(lay, "H", "p1")
    assert apply_hwp45(s, "p1").amplitude("V", "p1", "+") == 1
    assert np.array_equal(apply_hwp45(apply_hwp45(s, "p1"), "p1").amplitudes, s.amplitudes)


def test_phase_shift(lay):
    s = new_state(lay, "V", "p1")
    assert np.array_equal(apply_phase(s, "p1", "V", 0.0).amplitudes, s.amplitudes)
    assert apply_phase(s, "p1", "V", math.pi).amplitude("V", "p1", "+") == pytest.approx(-1)
    assert apply_phase(s, "p1", "H", math.pi).amplitude("V", "p1", "+") == 1
    half = apply_phase(apply_phase(s, "p1", "*", math.pi / 2), "p1", "*", math.pi / 2)
    assert np.allclose(half.amplitudes, apply_phase(s, "p1", "*", math.pi).amplitudes)


def test_phase_shift_validation(lay):
    with pytest.raises(LayoutError):
        apply_phase(new_state(lay), "p1", "D", 1.0)
    with pytest.raises(ValueError):
        apply_phase(new_state(lay), "p1", "H", math.inf)


def test_circuit_validates_elements(lay):
    with pytest.raises(LayoutError):
        Circuit(lay, [BS("p1", "zz")])
    with pytest.raises(LayoutError):
        Circuit(lay, [EmitterUnion("zz", "p1")])
    with pytest.raises(LayoutError):
        Circuit(lay, [PhaseShift("p1", "Q", 0.0)])


def test_empty_circuit_returns_input(lay):
    s = new_state(lay)
    assert run_circuit(Circuit(lay), ScatteringParams(40.0), s) is s


def test_single_bs_circuit(lay):
    out = run_circuit(Circuit(lay, [BS("p1", "p2")]), None, new_state(lay, "H", "p1"))
    assert abs(out.amplitude("H", "p1", "+")) == pytest.approx(abs(out.amplitude("H", "p2", "+")))


def test_circuit_concatenation(lay):
    c = Circuit(lay, [BS("p1", "p2")]) + Circuit(lay, [HWP45("o1"), PBS("p1", "p2", "o1", "o2"), EmitterUnion("a", "p1")])
    assert len(c) == 4
    assert c.union_count() == 1
    with pytest.raises(LayoutError):
        c + Circuit(RegisterLayout(("x",), ()))


def test_initial_state_layout_mismatch(lay):
    with pytest.raises(LayoutError):
        run_circuit(Circuit(lay), None, new_state(RegisterLayout(("x",), ())))


def test_two_qudit_generation_amplitudes():
    r = -40 / 41
    spec = SchemeSpec(4, 2)
    c = generation_circuit(spec)
    out = run_circuit(c, r, initial_state(c.layout))
    # levels 0..3 -> (H a1, H a2, V a1, V a2), emitters (++, +-, -+, --)
    got = [out.amplitude(pol, path, em) for pol, path, em in
           (("H", "a1", "++"), ("H", "a2", "+-"), ("V", "a1", "-+"), ("V", "a2", "--"))]
    assert np.allclose(got, np.array([1, -r, -r, r * r]) / 2, atol=1e-12)
    assert out.norm_sq() == pytest.approx(sum(abs(g) ** 2 for g in got))
