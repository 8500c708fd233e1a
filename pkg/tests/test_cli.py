import json
from importlib import resources

import pytest
from click.testing import CliRunner

jsonschema = pytest.importorskip("jsonschema")

from loopdirac.cli import main


def run(*args):
    return CliRunner().invoke(main, list(args))


def run_json(*args):
    res = run(*args)
    assert res.exit_code == 0, res.output + str(res.exception)
    return json.loads(res.output)


def schema(name):
    text = resources.files("loopdirac.schemas").joinpath(f"{name}.json").read_text()
    return json.loads(text)


def validate(name, payload):
    jsonschema.validate(payload, schema(name))


def test_rootdata_table_and_json():
    res = run("rootdata", "A", "1")
    assert res.exit_code == 0
    assert "dual Coxeter number: 2" in res.output
    payload = run_json("rootdata", "A", "2", "--json")
    validate("rootdata", payload)
    assert len(payload["positive_roots"]) == 3


def test_rootdata_invalid_type_exits_2():
    res = run("rootdata", "Z", "9")
    assert res.exit_code == 2


def test_alcove():
    payload = run_json("alcove", "A", "1", "--level", "2", "--json")
    validate("alcove", payload)
    assert payload["weights"] == [[0], [1], [2]]
    payload2 = run_json("alcove", "A", "2", "--level", "1", "--json")
    assert len(payload2["weights"]) == 3
    payload0 = run_json("alcove", "A", "1", "--level", "0", "--json")
    assert payload0["weights"] == [[0]]


def test_quantize_examples():
    payload = run_json("quantize", "A", "1", "--level", "1", "--eta", "1", "-N", "4", "--json")
    validate("quantize", payload)
    assert payload["index"] == [0, 1]
    payload0 = run_json("quantize", "A", "1", "--level", "1", "--eta", "0", "-N", "4", "--json")
    assert payload0["index"] == [1, 0]


def test_quantize_precondition_exit_2():
    res = run("quantize", "A", "1", "--level", "1", "--eta", "2", "-N", "4")
    assert res.exit_code == 2


def test_quantize_truncation_exit_3():
    res = run("quantize", "A", "1", "--level", "1", "--eta", "1", "-N", "0")
    assert res.exit_code == 3
    assert "-N 1" in res.stderr


def test_dirac_square():
    payload = run_json("dirac-square", "A", "1", "--xi", "1/3", "--lam", "2", "--json")
    validate("dirac_square", payload)
    assert payload["counts_match"] is True
    assert payload["max_deviation"] < 1e-9


def test_dirac_kernel():
    payload = run_json("dirac-kernel", "A", "1", "--xi", "1/3", "--lam", "1", "--json")
    validate("dirac_kernel", payload)
    signed = {tuple(e["nu"]): e["signed_mult"] for e in payload["kernel"]}
    assert signed == {("2/1",): 1, ("-2/1",): -1}


def test_character_finite_and_graded():
    payload = run_json("character", "A", "1", "--lam", "2", "--json")
    validate("character", payload)
    assert {tuple(e["mu"]) for e in payload["entries"]} == {(2,), (0,), (-2,)}
    graded = run_json("character", "A", "1", "--lam", "0", "--level", "1", "-N", "2", "--json")
    validate("character", graded)
    layer1 = [e for e in graded["entries"] if e["n"] == 1]
    assert len(layer1) == 3


def test_spinor_and_dump(tmp_path):
    payload = run_json("spinor", "A", "1", "--xi", "1/3", "-N", "2", "--json")
    validate("spinor", payload)
    assert payload["car_spot_check"] < 1e-12
    out = tmp_path / "op.txt"
    res = run("spinor", "A", "1", "--xi", "1/3", "-N", "1", "--dump-matrix", str(out))
    assert res.exit_code == 0
    lines = out.read_text().strip().splitlines()
    assert lines and all(len(line.split()) == 4 for line in lines)


def test_geo_alg_gap():
    payload = run_json(
        "geo-alg-gap", "A", "1", "--xi", "1/3", "--lams", "0;1;2", "--json"
    )
    validate("geo_alg_gap", payload)
    assert payload["spread"] <= 1e-9


def test_json_outputs_deterministic():
    args = ("quantize", "A", "1", "--level", "2", "--eta", "1", "-N", "5", "--json")
    first = run(*args)
    second = run(*args)
    assert first.output == second.output
    args2 = ("rootdata", "G", "2", "--json")
    assert run(*args2).output == run(*args2).output
