from __future__ import annotations

import io as stdio
import json

import pytest

from liepair import cli
from liepair.ce_complex import TruncationOverflow
from liepair.catalog import catalog
from liepair.io import pair_to_document


def run(*argv):
    out = stdio.StringIO()
    code = cli.run(list(argv), out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


@pytest.mark.parametrize("command", ["validate", "contraction", "transfer", "stasheff", "cohomology", "compare"])
def test_every_command_passes_on_a_catalog_pair(command):
    code, rep = run_json(command, "catalog:solvable", "--max-arity", "3")
    assert code == 0
    assert rep["passed"] and rep["command"] == command
    assert all(c["passed"] for c in rep["checks"])


def test_catalog_listing_and_show():
    code, data = run_json("catalog")
    assert code == 0
    assert {p["name"] for p in data["pairs"]} == set(catalog())
    code, doc = run_json("catalog", "heisenberg_x")
    assert code == 0 and doc["dim_g"] == 3
    assert run("catalog", "nope")[0] == 2


def test_invalid_pair_fails_with_witness(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dim_g": 3, "dim_h": 0, "brackets": [
        {"i": 1, "j": 2, "k": 3, "coeff": "1"}, {"i": 2, "j": 1, "k": 3, "coeff": "-1"},
        {"i": 2, "j": 3, "k": 2, "coeff": "1"}, {"i": 3, "j": 2, "k": 2, "coeff": "-1"}]}))
    code, rep = run_json("validate", str(path))
    assert code == 1
    jac = next(c for c in rep["checks"] if c["name"] == "jacobi")
    assert not jac["passed"]
    assert jac["witness"][0]["triple"] == [1, 2, 3]
    code, rep = run_json("transfer", str(path))
    assert code == 1 and rep["checks"][0]["name"] == "valid Lie pair"


def test_non_subalgebra_is_reported(tmp_path):
    path = tmp_path / "xy.json"
    path.write_text(json.dumps({"dim_g": 3, "dim_h": 2, "antisymmetrize": True,
                                "brackets": [{"i": 1, "j": 2, "k": 3, "coeff": "1"}]}))
    code, rep = run_json("validate", str(path))
    assert code == 1
    closure = next(c for c in rep["checks"] if c["name"] == "subalgebra closure")
    assert not closure["passed"]


@pytest.mark.parametrize("doc", [
    {"dim_g": 1, "dim_h": 2},
    {"dim_g": 2, "dim_h": 1, "brackets": [{"i": 1, "j": 2, "k": 2, "coeff": "x"}]},
])
def test_input_errors_exit_two(tmp_path, doc):
    path = tmp_path / "d.json"
    path.write_text(json.dumps(doc))
    code, rep = run_json("validate", str(path))
    assert code == 2
    assert rep["error"]["kind"] == "input"


def test_missing_file_and_bad_options_exit_two(tmp_path):
    assert run("validate", str(tmp_path / "none.json"))[0] == 2
    assert run("transfer", "catalog:solvable", "--truncation", "-1")[0] == 2
    assert run("transfer", "catalog:unknown")[0] == 2


def test_truncation_overflow_exits_three(monkeypatch):
    def boom(*args, **kwargs):
        raise TruncationOverflow("weight 5 exceeds the truncation 3", weight=5)

    monkeypatch.setattr(cli, "build_structure", boom)
    code, rep = run_json("transfer", "catalog:solvable")
    assert code == 3
    assert rep["error"]["kind"] == "truncation overflow"
    assert rep["error"]["weight"] == 5


def test_stasheff_reports_exact_zero_defects():
    code, rep = run_json("stasheff", "catalog:heisenberg_center", "--max-arity", "3")
    assert code == 0
    assert rep["tables"]["max_defect"] == {"1": "0/1", "2": "0/1", "3": "0/1"}


def test_degenerate_pair_has_no_higher_operations():
    code, rep = run_json("transfer", "catalog:solvable_h0", "--max-arity", "3")
    assert code == 0
    assert rep["tables"]["m"]["3"] == []
    assert rep["tables"]["nonzero_counts"]["2"] > 0


def test_compare_identical_choices_gives_identity():
    code, rep = run_json("compare", "catalog:heisenberg_x", "--max-arity", "2")
    assert code == 0
    f1 = rep["tables"]["f1"]
    assert all(col == {lab: "1/1"} for lab, col in f1.items())
    assert rep["tables"]["higher_nonzero_tuples"] == {"2": 0}


def test_compare_uses_document_choices(tmp_path):
    doc = pair_to_document(catalog()["solvable"])
    doc["choices"] = [
        {"label": "plain"},
        {"label": "shifted", "splitting_matrix": [["1", "1"], ["0", "2"]],
         "aux_connection": [{"x": 2, "y": 2, "z": 1, "coeff": "1/2"}]},
    ]
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    code, rep = run_json("compare", str(path), "--max-arity", "3")
    assert code == 0
    assert rep["tables"]["choices"] == ["plain", "shifted"]


def test_choice_files_on_command_line(tmp_path):
    split = tmp_path / "s.toml"
    split.write_text('splitting_matrix = [["1", "1/2"], ["0", "1"]]\n')
    aux = tmp_path / "a.json"
    aux.write_text(json.dumps({"aux_connection": [{"x": 1, "y": 2, "z": 2, "coeff": "1"}]}))
    code, rep = run_json("stasheff", "catalog:solvable", "--splitting", str(split),
                         "--aux-connection", str(aux), "--max-arity", "3")
    assert code == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"splitting_matrix": [["1", "0"], ["0", "0"]]}))
    code, rep = run_json("stasheff", "catalog:solvable", "--splitting", str(bad))
    assert code == 2
    assert rep["error"]["message"] == "splitting matrix is singular"
    assert rep["input_digest"]


def test_document_defaults_and_truncation_zero(tmp_path):
    doc = pair_to_document(catalog()["solvable"])
    doc["truncation"] = 0
    doc["max_arity"] = 2
    path = tmp_path / "t.json"
    path.write_text(json.dumps(doc))
    code, rep = run_json("transfer", str(path))
    assert code == 0
    assert rep["options"] == {"truncation": 0, "max_arity": 2}


def test_output_is_deterministic():
    args = ("stasheff", "catalog:sl2_borel", "--max-arity", "3")
    first = run(*args)
    assert run(*args) == first
    assert run(*args, "--parallel", "4") == first


def test_text_output():
    code, text = run("validate", "catalog:solvable", "--output", "text")
    assert code == 0
    assert text.startswith("command: \"validate\"\n")
    assert "passed: true" in text
