import pytest

from quditwg import scattering
from quditwg.cli import main
from quditwg.verify import SUITES, run_verify


def test_all_suites_pass():
    report = run_verify("all")
    assert report.passed, report.text()
    assert report.seconds < 10


def test_table2_message():
    text = run_verify("table2").text()
    assert "64/64 Table-2 targets reached" in text


def test_detuned_discrepancies_are_listed():
    report = run_verify("detuned")
    assert report.passed
    text = report.text()
    assert "[KNOWN DISCREPANCY] 4D two-qudit F at P=25, detuning 0.05: computed 0.994462, published 0.9823" in text
    assert "published 0.9170" in text
    assert "published 0.9527" in text


@pytest.mark.parametrize("suite", SUITES)
def test_each_suite_runs(suite):
    assert run_verify(suite).checks


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_verify("nope")


def test_sign_bug_is_caught(monkeypatch, capsys):
    original = scattering.union_scatter

    def wrong_sign(state, emitter, path, r):
        return original(state, emitter, path, -r)

    monkeypatch.setattr(scattering, "union_scatter", wrong_sign)
    assert main(["verify"]) == 2
    out = capsys.readouterr().out
    assert "[FAIL]" in out
