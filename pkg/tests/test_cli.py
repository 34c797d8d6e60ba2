"""CLI surface: subcommands, formats, determinism, file output."""

import csv
import io
import json
import os

import pytest

from ar1lab.cli import main


def run_cli(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, out


def test_poly_json(capsys):
    rc, out = run_cli(capsys, ["poly", "--family", "J", "--nmax", "3", "--format", "json"])
    assert rc == 0
    records = json.loads(out)
    assert records[2] == {"family": "J", "n": 3, "coefficients": ["2", "1"]}


def test_poly_tutte_nested(capsys):
    rc, out = run_cli(capsys, ["poly", "--family", "tutte", "--nmax", "3", "--format", "json"])
    assert rc == 0
    records = json.loads(out)
    assert records[2]["coefficients"] == [[], ["3", "1"], ["3"], ["1"]]


def test_poly_negative_scan_finds_witness(capsys):
    rc, out = run_cli(capsys, ["poly", "--family", "J", "--nmax", "6", "--scan-negative"])
    assert rc == 0
    payload = json.loads(out)
    hits = {(w["n"], w["theta"]) for w in payload["negative_witnesses"] if w["kind"] == "value"}
    assert (4, "-2") in hits


def test_poly_checked_routes_and_other_families(capsys):
    rc, out = run_cli(capsys, ["poly", "--family", "J", "--nmax", "6", "--check-routes", "--format", "json"])
    assert rc == 0 and json.loads(out)[5]["coefficients"][0] == "120"
    rc, out = run_cli(capsys, ["poly", "--family", "zigzag", "--nmax", "6", "--format", "json"])
    assert json.loads(out)[4]["coefficients"] == ["16"]  # A_5
    assert json.loads(out)[5]["coefficients"] == ["61"]  # A_6
    rc, out = run_cli(capsys, ["poly", "--family", "C", "--nmax", "4", "--format", "json"])
    assert json.loads(out)[3]["coefficients"][0] == "12"  # n!/2 at n = 4
    rc, out = run_cli(capsys, ["poly", "--family", "volume", "--nmax", "2", "--format", "json"])
    assert json.loads(out)[0]["coefficients"] == ["-1", "1"]


def test_simulate_atomic_law(capsys):
    rc, out = run_cli(
        capsys,
        ["simulate", "--law", "atomic", "--atom-mass", "0.4", "--theta", "-2",
         "--n", "2", "--trials", "20000", "--seed", "4"],
    )
    assert rc == 0
    payload = json.loads(out)
    assert payload["exact"] is None
    assert 0 <= payload["estimate"] <= 1


def test_rates_unsupported_band_fails_cleanly(capsys):
    rc = main(["rates", "--theta", "0.75"])
    captured = capsys.readouterr()
    assert rc == 2
    assert "error:" in captured.err


def test_persist_table(capsys):
    rc, out = run_cli(capsys, ["persist", "--nmax", "3", "--theta", "4/5"])
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["p_exact"] == "1"
    assert rows[3]["region_tag"] == "fibonacci-window"
    assert rows[3]["p_exact"] == "4181/15360"


def test_verify_passes(capsys):
    rc, out = run_cli(capsys, ["verify", "--nmax", "4"])
    assert rc == 0
    assert out.count("EXACT PASS") >= 20
    assert "FAIL" not in out.replace("EXACT PASS", "")


def test_simulate_json(capsys):
    rc, out = run_cli(
        capsys,
        ["simulate", "--theta", "0", "--n", "5", "--trials", "40000", "--seed", "3"],
    )
    assert rc == 0
    payload = json.loads(out)
    assert payload["exact"] == 0.03125
    assert abs(payload["z_score"]) < 5
    assert payload["seed"] == 3


def test_rates_csv(capsys):
    rc, out = run_cli(capsys, ["rates", "--theta", "-1", "--theta", "0"])
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[0]["lambda_or_mu"]) == pytest.approx(3.141592653589793, abs=1e-10)
    assert float(rows[1]["lambda_or_mu"]) == pytest.approx(2.0, abs=1e-12)


def test_volume_json(capsys):
    rc, out = run_cli(
        capsys,
        ["volume", "--kind", "zigzag", "--n", "3", "--trials", "60000", "--seed", "2"],
    )
    assert rc == 0
    payload = json.loads(out)
    assert payload["exact"] == "1/3"
    assert payload["in_interval"] is True


def test_figure_reference_values(capsys):
    rc, out = run_cli(capsys, ["figure", "--n", "4", "5", "--grid", "1/4"])
    assert rc == 0
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    rows = {r["theta"]: r for r in csv.DictReader(body)}
    assert rows["0"]["p_4"] == "1/16"
    assert rows["0"]["p_5"] == "1/32"
    assert rows["-1"]["p_4"] == "5/384"
    assert rows["-1"]["p_5"] == "1/240"
    assert rows["1"]["p_4"] == "35/128"
    assert rows["1"]["p_5"] == "63/256"
    assert rows["-1"]["marker"] == "theta=-1"
    assert any(ln.startswith("# one_sided_derivatives n=4") for ln in out.splitlines())
    assert any(ln.startswith("# fibonacci_breakpoints") for ln in out.splitlines())


def test_outputs_are_reproducible(capsys):
    argv = ["simulate", "--theta", "1/2", "--n", "4", "--trials", "30000", "--seed", "11"]
    _, first = run_cli(capsys, argv)
    _, second = run_cli(capsys, argv)
    assert first == second
    argv = ["figure", "--grid", "1/2"]
    _, first = run_cli(capsys, argv)
    _, second = run_cli(capsys, argv)
    assert first == second


def test_out_file_and_env_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("AR1LAB_OUT", str(tmp_path))
    rc, out = run_cli(capsys, ["persist", "--nmax", "2", "--theta", "0", "--out", "table.csv"])
    assert rc == 0 and out == ""
    written = (tmp_path / "table.csv").read_text()
    assert "region_tag" in written

    target = tmp_path / "abs.csv"
    rc, _ = run_cli(capsys, ["persist", "--nmax", "1", "--theta", "0", "--out", str(target)])
    assert rc == 0 and target.exists()
