import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quditwg.errors import SchemeError
from quditwg.sweep import (FIELDS, Scheme, SweepGrid, SweepRow, default_filename, emit,
                           evaluate_point, read_csv, read_json, run_sweep, to_csv, to_json)


def test_headline_point():
    rows = run_sweep(SweepGrid((40.0,), (0.0,), "gen-d4-n2-b0"))
    assert len(rows) == 1
    assert rows[0].fidelity == pytest.approx(0.99970, abs=5e-6)
    assert rows[0].efficiency == pytest.approx(0.95210, abs=5e-6)


def test_large_purcell_limit():
    row = evaluate_point("gen-d4-n3-b2", 1e9, 0.0)
    assert row.fidelity == pytest.approx(1, abs=1e-6)
    assert row.efficiency == pytest.approx(1, abs=1e-6)


def test_x_gate_family():
    row = evaluate_point("t2-k0-p0-q1", 40.0, 0.0)
    assert row.fidelity == pytest.approx(0.998023, abs=1e-6)
    assert row.efficiency == pytest.approx(0.842934, abs=1e-6)
    assert row.q == (0, 1)


def test_gate_scheme():
    row = evaluate_point("xgate-m1", 40.0, 0.0)
    assert row.fidelity == pytest.approx(0.99985, abs=5e-6)
    assert row.efficiency == pytest.approx(0.92874, abs=5e-6)


def test_phase_scheme():
    row = evaluate_point("gen-d4-n2-b0-k1", 40.0, 0.0)
    assert row.k == 1
    assert row.fidelity == pytest.approx(0.999695, abs=1e-6)


@pytest.mark.parametrize("bad", ["nope", "gen-d9-n2-b0", "gen-d8-n2-b0-k1", "xgate-mx"])
def test_bad_scheme_ids(bad):
    with pytest.raises(SchemeError):
        Scheme(bad)


def test_grid_validation():
    with pytest.raises(SchemeError):
        SweepGrid((), (0.0,))
    with pytest.raises(SchemeError):
        SweepGrid((2.0, 1.0), (0.0,))
    with pytest.raises(SchemeError):
        SweepGrid((0.0, 1.0), (0.0,))


def test_default_grid_shape():
    g = SweepGrid.default()
    assert len(g.purcell) == 40 and len(g.detuning) == 41
    assert g.purcell[0] == pytest.approx(1) and g.purcell[-1] == pytest.approx(100)


def test_empty_and_single_row_csv():
    assert to_csv([]) == ",".join(FIELDS) + "\n"
    lines = to_csv([evaluate_point("gen-d4-n2-b0", 40.0, 0.0)]).splitlines()
    assert len(lines) == 2
    assert len(lines[1].split(",")) == 10


def test_csv_and_json_round_trip():
    rows = run_sweep(SweepGrid((1.0, 7.5, 40.0), (-0.1, 0.0, 0.13), "t2-k2-p1-q3"))
    for back in (read_csv(to_csv(rows)), read_json(to_json(rows))):
        assert len(back) == len(rows)
        for a, b in zip(rows, back):
            assert (a.scheme, a.d, a.n, a.k, a.q) == (b.scheme, b.d, b.n, b.k, b.q)
            for f in ("purcell", "detuning", "fidelity", "efficiency", "herald_failure"):
                assert getattr(b, f) == pytest.approx(getattr(a, f), rel=1e-8, abs=1e-9)


def test_parallel_matches_serial():
    grid = SweepGrid((1.0, 5.0, 40.0), (0.0, 0.1), "gen-d4-n3-b1")
    assert run_sweep(grid, workers=2) == run_sweep(grid, workers=1)


def test_emit(tmp_path):
    rows = [evaluate_point("gen-d4-n2-b0", 40.0, 0.0)]
    buf = io.StringIO()
    emit(rows, "json", buf)
    assert read_json(buf.getvalue()) == read_json(to_json(rows))
    out = tmp_path / default_filename("gen-d4-n2-b0")
    emit(rows, "csv", out)
    assert out.read_text() == to_csv(rows)
    with pytest.raises(SchemeError):
        emit(rows, "xml")


_float = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.builds(SweepRow, st.just("gen-d4-n2-b0"), st.just(4), st.integers(2, 5), st.integers(0, 3),
                          st.lists(st.integers(0, 3), min_size=1, max_size=4).map(tuple),
                          _float, _float, _float, _float, _float), max_size=5))
def test_csv_round_trip_property(rows):
    back = read_csv(to_csv(rows))
    assert [r.q for r in back] == [r.q for r in rows]
    for a, b in zip(rows, back):
        assert b.fidelity == pytest.approx(a.fidelity, rel=1e-8, abs=1e-9)
