import math

import numpy as np
import pytest

from quditwg import (ConsistencyError, DomainError, LayoutError, RegisterLayout,
                     ScatteringParams, heralded_failure_probability, new_state,
                     reflection_coefficient, union_scatter)

R40 = -40 / 41


@pytest.mark.parametrize("purcell, detuning, r", [
    (40.0, 0.0, -40 / 41),
    (1.0, 0.0, -0.5),
    (25.0, 0.05, -0.952730 - 0.091609j),
])
def test_reflection_coefficient_values(purcell, detuning, r):
    rc = reflection_coefficient(ScatteringParams(purcell, detuning))
    assert abs(rc.r - r) < 1e-6
    assert rc.t == pytest.approx(rc.r + 1)


def test_large_purcell_is_a_mirror():
    rc = reflection_coefficient(ScatteringParams(1e12))
    assert abs(rc.r + 1) < 1e-11
    assert abs(rc.t) < 1e-11


def test_detuned_point_matches_complex_division():
    rc = reflection_coefficient(ScatteringParams(25.0, 0.05))
    expected = -(1.04 + 0.1j) / abs(1.04 - 0.1j) ** 2
    assert abs(rc.r - expected) < 1e-15


def test_loss_is_nonnegative_and_zero_on_resonance_mirror():
    assert reflection_coefficient(ScatteringParams(40.0)).loss == pytest.approx(1 - (40 / 41) ** 2 - (1 / 41) ** 2)
    for p in (0.5, 3.0, 200.0):
        assert reflection_coefficient(ScatteringParams(p, 0.1)).loss >= 0


@pytest.mark.parametrize("purcell", [0.0, -1.0, math.inf, math.nan])
def test_bad_purcell(purcell):
    with pytest.raises(DomainError):
        ScatteringParams(purcell)


def test_bad_detuning():
    with pytest.raises(DomainError):
        ScatteringParams(10.0, math.nan)


@pytest.fixture
def one():
    return RegisterLayout(("p",), ("a",))


def test_union_on_g_plus(one):
    s = new_state(one, "H", "p", ["g+"])
    out = union_scatter(s, "a", "p", R40)
    assert np.allclose(out.amplitudes, R40 * new_state(one, "V", "p", ["g+"]).amplitudes)


def test_union_on_g_minus_gets_opposite_sign(one):
    s = new_state(one, "H", "p", ["g-"])
    out = union_scatter(s, "a", "p", R40)
    assert np.allclose(out.amplitudes, -R40 * new_state(one, "V", "p", ["g-"]).amplitudes)


def test_union_in_superposition_basis(one):
    s = new_state(one, "H", "p", ["+"])
    out = union_scatter(s, "a", "p", R40)
    assert out.amplitude("V", "p", "-") == pytest.approx(-R40)
    assert out.amplitude("H", "p", "+") == 0


def test_ideal_union_twice_is_identity(one):
    s = new_state(one, "H", "p", ["+"])
    out = union_scatter(union_scatter(s, "a", "p", -1.0), "a", "p", -1.0)
    assert np.allclose(out.amplitudes, s.amplitudes)


def test_union_leaves_other_paths_alone():
    lay = RegisterLayout(("p", "q"), ("a",))
    s = new_state(lay, "HV", "q")
    assert np.array_equal(union_scatter(s, "a", "p", R40).amplitudes, s.amplitudes)


def test_union_unknown_names(one):
    s = new_state(one)
    with pytest.raises(LayoutError):
        union_scatter(s, "zz", "p", R40)
    with pytest.raises(LayoutError):
        union_scatter(s, "a", "zz", R40)


def test_heralded_failure(one):
    s = new_state(one, "H", "p")
    assert heralded_failure_probability(s) == 0
    once = union_scatter(s, "a", "p", R40)
    assert heralded_failure_probability(once) == pytest.approx(0.048186, abs=1e-6)
    twice = union_scatter(once, "a", "p", R40)
    assert heralded_failure_probability(twice) == pytest.approx(0.094050, abs=1e-6)


def test_heralded_failure_rejects_overnormalized(one):
    with pytest.raises(ConsistencyError):
        heralded_failure_probability(new_state(one) * 1.01)
