import csv
import io
import json
from importlib import resources

import jsonschema
import pytest

from qkummer.cli import RunConfig, main, render, run
from qkummer.scalars import parse_scalar

SCHEMA = json.loads(resources.files("qkummer").joinpath("report.schema.json").read_text())


def run_cli(tmp_path, *args, name="out.json"):
    out = tmp_path / name
    code = main([*args, "--output", str(out)])
    return code, out


@pytest.mark.parametrize("command", ["hochschild", "cyclic", "periodic", "invariance", "reduce-cycle"])
def test_commands_validate(tmp_path, command):
    code, out = run_cli(tmp_path, command, "--n", "2", "--backend", "exact", "--seed", "3")
    assert code == 0
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    assert set(report) == {"config", "results", "checks", "notes"}
    assert all(c["pass"] for c in report["checks"])


def test_verify_all_n2(tmp_path):
    code, out = run_cli(tmp_path, "verify-all", "--n", "2", "--backend", "exact")
    assert code == 0
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    res = report["results"]
    assert res["crossed_product"]["hh_dims"] == {"0": 5, "1": 0, "2": 1}
    assert res["cyclic"]["hc_dims"]["8"] == 6
    assert (res["periodic"]["hp_even"], res["periodic"]["hp_odd"]) == (6, 0)
    assert any("H_0" in note for note in report["notes"])


def test_hochschild_n3_window3(tmp_path):
    code, out = run_cli(tmp_path, "hochschild", "--n", "3", "--window", "3")
    assert code == 0
    tw = json.loads(out.read_text())["results"]["twisted"]
    assert tw["dims"] == {"0": 8, "1": 0, "2": 0, "3": 0}
    assert all(tw["stabilized"].values())


def test_reduce_cycle_certificate(tmp_path):
    code, out = run_cli(tmp_path, "reduce-cycle", "--n", "2", "--seed", "7")
    assert code == 0
    cert = json.loads(out.read_text())["results"]["reduce_cycle"][0]
    assert cert["seed"] == 7 and cert["residual"] == [] and cert["round_trip"]
    for term in cert["input"] + cert["preimage"]:
        parse_scalar(term["coef"])


def test_reports_are_byte_identical(tmp_path):
    args = ["verify-all", "--n", "2", "--backend", "modular", "--seed", "9"]
    _, a = run_cli(tmp_path, *args, name="a.json")
    a_bytes = a.read_bytes()
    _, b = run_cli(tmp_path, *args, name="a.json")
    assert b.read_bytes() == a_bytes
    assert json.loads(a_bytes)["results"]["twisted"]["blocks_checked"]["seeds"] == [9, 10, 11]


def test_csv(tmp_path):
    code, out = run_cli(tmp_path, "cyclic", "--n", "2", "--format", "csv", name="out.csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert list(rows[0]) == ["command", "n", "degree", "dimension", "expected", "pass"]
    hc = [r for r in rows if r["degree"] == "4" and r["dimension"] == "6"]
    assert hc and all(r["pass"] == "true" for r in rows)


@pytest.mark.parametrize("args", [
    ["hochschild", "--n", "1"],
    ["hochschild", "--n", "5"],
    ["hochschild", "--window", "1"],
    ["hochschild", "--margin", "1"],
    ["hochschild", "--backend", "float"],
    ["hochschild", "--format", "xml"],
    ["hochschild", "--n", "two"],
    ["plot"],
])
def test_invalid_config_exits_4(tmp_path, args):
    try:
        code = main([*args, "--output", str(tmp_path / "x.json")])
    except SystemExit as e:
        code = e.code
    assert code == 4


def test_failed_check_exit_codes(monkeypatch):
    from qkummer import cli

    status, _ = run(RunConfig("hochschild", n=2, backend="exact"))
    assert status == 0

    monkeypatch.setattr(cli, "closed_form_hc", lambda n, m: -1)
    status, report = run(RunConfig("cyclic", n=2, backend="exact"))
    assert status == 2
    assert not all(c["pass"] for c in report["checks"])


def test_stabilization_failure_exit_code(monkeypatch):
    from qkummer import cli

    def unstable(*a, **k):
        raise cli.NotStabilized("degree 1: {1: 0, 2: 1}")

    monkeypatch.setattr(cli, "twisted_result", unstable)
    status, report = run(RunConfig("hochschild", n=2))
    assert status == 3
    assert render(report, "json").startswith("{")
