import cmath
import json
from importlib.resources import files

import pytest

from fermat_kit import DiffDelta, ExpPoly, Scalar, dump_spec, parse_spec
from fermat_kit.cli import run
from fermat_kit.errors import SchemaError, SpecDuplicateExponential, SpecSyntaxError
from fermat_kit.fixtures import cosh_form

SPECS = files("fermat_kit") / "data" / "specs"
I = Scalar.imag_unit()
PI = Scalar.atom("pi")


def _spec_text(name):
    return (SPECS / name).read_text(encoding="utf-8")


def _run(argv, capsys):
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


def test_parse_cosh_diff_delta_spec():
    spec = parse_spec(_spec_text("cosh_diff_delta_verify.json").encode())
    assert spec.command == "verify" and spec.backend == "exact"
    eq = spec.payload.equation
    assert isinstance(eq.op, DiffDelta) and eq.op.k == 1 and eq.op.c == I * PI
    assert spec.payload.f == cosh_form(3, Scalar.atom("e", 2), 2, 3)
    assert eq.rhs == ExpPoly.constant(6)


def test_missing_command_block():
    with pytest.raises(SchemaError, match="no command block"):
        parse_spec(b'{"version":"1"}')


def test_conflicting_exponential_declarations():
    text = json.dumps({"version": "1", "exponentials": [["3*pi*i", -1], ["3*pi*i", 1]],
                       "gate": {"m": 8, "n": 1, "tau": 1, "class": "meromorphic"}})
    with pytest.raises(SpecDuplicateExponential) as info:
        parse_spec(text.encode())
    assert info.value.line >= 1


def test_consistent_redeclaration_is_accepted():
    text = json.dumps({"version": "1", "exponentials": [["3*pi*i", -1], ["pi*i", -1]],
                       "gate": {"m": 8, "n": 1, "tau": 1, "class": "meromorphic"}})
    assert parse_spec(text).command == "gate"


def test_syntax_error_position():
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec(b'{"version": "1",\n  "verify": {,}}')
    assert (info.value.line, info.value.column) == (2, 14)  # the stray comma


def test_non_utf8_rejected():
    with pytest.raises(SpecSyntaxError):
        parse_spec(b'{"version": "\xff"}')


def test_schema_error_reports_location():
    text = '{\n  "version": "1",\n  "gate": {"m": "eight", "n": 1, "tau": 1, "class": "entire"}\n}'
    with pytest.raises(SchemaError) as info:
        parse_spec(text)
    assert info.value.line == 3


@pytest.mark.parametrize("name", ["cosh_diff_delta_verify.json", "exp_plus_z_search.json",
                                  "mixed_odd_odd_build.json", "difference_pins_build.json"])
def test_round_trip(name):
    spec = parse_spec(_spec_text(name))
    assert parse_spec(dump_spec(spec)) == spec


def test_verify_demo_spec(capsys):
    code, doc = _run(["verify", "--spec", str(SPECS / "cosh_diff_delta_verify.json")], capsys)
    assert code == 0 and doc["symbolic_pass"] is True


def test_verify_perturbed_fails(capsys):
    doc = json.loads(_spec_text("cosh_diff_delta_verify.json"))
    doc["verify"]["equation"]["op"]["R"] = ["-101/(600*i)"]
    code, out = _run(["verify", "--json", json.dumps(doc)], capsys)
    assert code == 1 and out["symbolic_pass"] is False


def test_gate_flags(capsys):
    code, doc = _run(["gate", "--m", "8", "--n", "1", "--tau", "1", "--class", "meromorphic"],
                     capsys)
    assert code == 0 and doc["verdict"] == "NonexistenceGuaranteed"
    code, doc = _run(["gate", "--json", '{"m": 2, "n": 1, "tau": 3, "class": "entire"}'], capsys)
    assert code == 0 and doc["verdict"] == "NotCovered"


def test_fixtures_command(capsys):
    code = run(["fixtures"])
    captured = capsys.readouterr()
    doc = json.loads(captured.out)
    assert code == 0 and doc["all_passed"] is True
    assert "PASS" in captured.err


def test_build_difference_pins_is_infeasible(capsys):
    code, doc = _run(["build", "--spec", str(SPECS / "difference_pins_build.json")], capsys)
    assert code == 1
    assert doc["result"] == "Infeasible" and doc["rule"] == "difference_operator"
    assert "certificate" in doc


def test_build_mixed(capsys):
    code, doc = _run(["build", "--spec", str(SPECS / "mixed_odd_odd_build.json")], capsys)
    assert code == 0 and doc["operation"] == "mixed"
    assert doc["report"]["symbolic_pass"] or doc["report"]["sample_max_abs"] < 1e-8


def test_eval_matches_direct(capsys):
    block = {"f": [{"poly": [1], "freq": 1}, {"poly": [0, 1], "freq": 0}],
             "points": [0, 1, "i"], "derivative": 1}
    code, doc = _run(["eval", "--json", json.dumps(block)], capsys)
    assert code == 0
    for (re, im), z in zip(doc["values"], (0, 1, 1j)):
        assert abs(complex(re, im) - (cmath.exp(z) + 1)) < 1e-12


def test_search_demo_spec(capsys):
    code, doc = _run(["search", "--spec", str(SPECS / "exp_plus_z_search.json")], capsys)
    assert code == 0 and doc["result"] == "Solutions"
    assert doc["solutions"] and len(doc["space"]["freq_lattice"]) == 9


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["verify"],
    ["gate", "--m", "8"],
    ["verify", "--spec", "/nonexistent/spec.json"],
    ["verify", "--json", '{"version": "1"}'],
    ["build", "--spec", str(SPECS / "cosh_diff_delta_verify.json")],
])
def test_usage_errors_exit_2(argv, capsys):
    code, doc = _run(argv, capsys)
    assert code == 2 and "error" in doc


def test_duplicate_exponential_exit_2(capsys):
    text = json.dumps({"version": "1", "exponentials": [["3*pi*i", -1], ["3*pi*i", 1]],
                       "gate": {"m": 8, "n": 1, "tau": 1, "class": "meromorphic"}})
    code, doc = _run(["gate", "--json", text], capsys)
    assert code == 2 and doc["error"] == "SpecDuplicateExponential"


def test_eps_env_override(monkeypatch, capsys):
    monkeypatch.setenv("FERMAT_KIT_EPS", "1e-20")
    code, _ = _run(["verify", "--spec", str(SPECS / "cosh_diff_delta_verify.json")], capsys)
    assert code == 0
    monkeypatch.setenv("FERMAT_KIT_EPS", "not-a-number")
    code, doc = _run(["verify", "--spec", str(SPECS / "cosh_diff_delta_verify.json")], capsys)
    assert code == 2 and "FERMAT_KIT_EPS" in doc["message"]
