from __future__ import annotations

import io
import json
from importlib.resources import files

import jsonschema
import pytest
from referencing import Registry, Resource

from turanlab import __version__
from turanlab.cli import run
from turanlab.hgio import read_hg
from turanlab.hypercore import canonical_form
from turanlab import constructions as C


def _schema(name: str) -> tuple[dict, Registry]:
    root = files("turanlab") / "schemas"
    env = json.loads((root / "envelope.json").read_text())
    registry = Registry().with_resource("envelope.json", Resource.from_contents(env))
    return json.loads((root / f"{name}.json").read_text()), registry


def validate(report: dict, name: str) -> None:
    schema, registry = _schema(name)
    jsonschema.Draft202012Validator(schema, registry=registry).validate(report)


def call(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv: str) -> tuple[int, dict]:
    code, out, err = call(*argv, "--format", "json")
    return code, json.loads(out)


def test_construct_writes_file(tmp_path):
    path = tmp_path / "g.hg"
    code, rep = call_json("construct", "main-extremal", "--n", "12", "--l", "3", "--s", "2", "--r", "3", "-o", str(path))
    assert code == 0 and rep["edges"] == 50 and rep["parts"] == [2, 5, 5]
    validate(rep, "construct")
    H, parts = read_hg(path)
    assert len(H) == 50 and [len(p) for p in parts] == [2, 5, 5]
    assert canonical_form(H, max_n=12) == canonical_form(C.main_extremal(12, 3, 2, 3).hypergraph, max_n=12)
    assert rep["version"] == __version__ and rep["config"]["kind"] == "main-extremal"


def test_construct_to_stdout():
    code, rep = call_json("construct", "fano")
    assert code == 0 and rep["hg"].startswith("7 3 7\n")


def test_construct_errors():
    assert call("construct", "main-extremal", "--n", "12")[0] == 2
    assert call("construct", "unknown-kind", "--n", "3")[0] == 2
    assert call("construct", "main-extremal", "--n", "12", "--l", "2", "--s", "2", "--r", "3")[0] == 2


@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "g.hg"
    assert call("construct", "main-extremal", "--n", "12", "--l", "3", "--s", "2", "--r", "3", "-o", str(path))[0] == 0
    return str(path)


def test_check_k_family_free(graph_file):
    code, rep = call_json("check", "k-family", "--l", "3", graph_file)
    assert code == 0 and rep["holds"] is False and rep["satisfied"] is True
    validate(rep, "check")


def test_check_contains_gives_exit_one(tmp_path):
    path = tmp_path / "k.hg"
    call("construct", "complete", "--n", "5", "--r", "3", "-o", str(path))
    code, rep = call_json("check", "k-family", "--l", "3", str(path))
    assert code == 1 and rep["holds"] is True and rep["witness"]["kind"] == "k-family"
    validate(rep, "check")


def test_check_other_kinds(graph_file, tmp_path):
    code, rep = call_json("check", "matching-atmost", "--s", "2", graph_file)
    assert code == 0 and rep["matching_number"] == 2
    assert call("check", "matching-atmost", "--s", "1", graph_file)[0] == 1
    assert call_json("check", "expansion", "--l", "3", graph_file)[0] == 0
    assert call_json("check", "fano", graph_file)[0] == 0
    assert call_json("check", "strong-indep", "--set", "0,1", graph_file)[0] == 0
    assert call_json("check", "weak-indep", "--set", "2,3,4,5,6,7,8,9,10,11", graph_file)[0] == 0
    assert call_json("check", "strong-indep", "--set", "2,3,7", graph_file)[0] == 1
    code, rep = call_json("check", "edge-coloring", graph_file)
    assert code == 0 and rep["num_colors"] <= rep["bound"]
    code, rep = call_json("check", "high-degree", "--s", "2", graph_file)
    assert code == 0 and len(rep["vertices"]) <= 2
    pattern = tmp_path / "k3.hg"
    call("construct", "complete", "--n", "3", "--r", "2", "-o", str(pattern))
    code, rep = call_json("check", "berge", "--pattern", str(pattern), graph_file)
    assert code == 1 and rep["holds"] is True
    for kind in ("matching-atmost", "berge", "strong-indep", "high-degree"):
        validate(call_json("check", kind, "--s", "2", "--pattern", str(pattern), "--set", "0", graph_file)[1], "check")


def test_check_usage_errors(graph_file, tmp_path):
    assert call("check", "k-family", graph_file)[0] == 2
    assert call("check", "berge", graph_file)[0] == 2
    assert call("check", "weak-indep", "--set", "0,99", graph_file)[0] == 2
    assert call("check", "fano", str(tmp_path / "missing.hg"))[0] == 2
    assert call("check", "nope", graph_file)[0] == 2


def test_malformed_file_reports_line(tmp_path):
    bad = tmp_path / "bad.hg"
    bad.write_text("4 2 2\n0 1\n0 9\n")
    code, out, err = call("check", "fano", str(bad))
    assert code == 2 and "line 3" in err


def test_formula():
    code, rep = call_json("formula", "main", "--n", "12", "--l", "3", "--s", "2", "--r", "3")
    assert code == 0 and rep["value"] == 50 and rep["in_theorem_range"] == "unknown"
    validate(rep, "formula")
    assert call("formula", "main", "--n", "12")[0] == 2


def test_search_exact_and_json(tmp_path):
    out = tmp_path / "r.json"
    code, rep = call_json(
        "search", "--n", "6", "--r", "2", "--constraint", "k-family:2", "--constraint", "matching-atmost:1", "--json", str(out)
    )
    assert code == 0 and rep["optimum"] == 5 and rep["proof_of_optimality"]
    validate(rep, "search")
    saved = json.loads(out.read_text())
    assert saved["optimum"] == 5 and saved["witnesses"] == rep["witnesses"]


def test_search_enumerate_and_heuristic(tmp_path):
    code, rep = call_json("search", "--n", "6", "--r", "2", "--constraint", "k-family:2", "--constraint", "matching-atmost:1", "--enumerate")
    assert code == 0 and rep["isomorphism_classes"] == 1
    validate(rep, "search")
    seed = tmp_path / "seed.hg"
    call("construct", "main-extremal", "--n", "10", "--l", "3", "--s", "1", "--r", "3", "-o", str(seed))
    code, rep = call_json(
        "search", "--n", "10", "--r", "3", "--constraint", "k-family:3", "--constraint", "matching-atmost:1",
        "--heuristic", "--seed", str(seed), "--iterations", "200", "--rng-seed", "3",
    )
    assert code == 0 and rep["optimum"] >= 16 and rep["rng_seed"] == 3 and rep["mode"] == "heuristic"
    validate(rep, "search")


def test_search_budget_and_usage():
    assert call("search", "--n", "9", "--r", "3")[0] == 3
    assert call("search", "--n", "6", "--r", "3", "--constraint", "k-family:3", "--node-limit", "3")[0] == 3
    assert call("search", "--n", "6", "--r", "3", "--constraint", "bogus:3")[0] == 2
    assert call("search", "--n", "6", "--r", "3", "--constraint", "k-family")[0] == 2
    assert call("search", "--n", "6", "--r", "3", "--constraint", "k-family:x")[0] == 2
    assert call("search", "--n", "6", "--r", "3", "--heuristic", "--enumerate")[0] == 2
    assert call("search", "--n", "6")[0] == 2


def test_verify():
    code, rep = call_json("verify", "theorem-1.1", "--n", "6", "--l", "2", "--s", "1")
    assert code == 0 and rep["verdict"] == "confirmed"
    validate(rep, "verify")
    code, rep = call_json("verify", "conjecture-4.1", "--n", "12", "--l", "3", "--s", "2", "--r", "3")
    assert code == 0 and rep["construction_count"] == 51
    validate(rep, "verify")
    assert call("verify", "theorem-1.1", "--n", "6")[0] == 2


def test_text_and_json_report_same_numbers():
    argv = ("verify", "theorem-1.5", "--n", "6", "--l", "3", "--s", "1", "--r", "3")
    _, rep = call_json(*argv)
    code, text, _ = call(*argv)
    lines = dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)
    assert lines["search.optimum"] == str(rep["search"]["optimum"])
    assert lines["formula.value"] == str(rep["formula"]["value"])
    assert lines["construction_count"] == str(rep["construction_count"])
    assert "e+" not in text and "e-" not in text.replace("theorem-", "")


def test_table_grid_and_spec(tmp_path):
    code, out, _ = call("table", "--grid", "theorem-1.1")
    assert code == 0 and out.count("confirmed") == 10
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps([{"theorem": "conjecture-4.1", "params": {"n": 12, "l": 3, "s": 2, "r": 3}}]))
    code, out, _ = call("table", "--spec", str(spec), "--format", "json")
    rep = json.loads(out)
    validate(rep, "table")
    assert rep["rows"][0]["construction"] == 51 and rep["rows"][0]["formula"] == 50
    spec.write_text("[]")
    code, out, _ = call("table", "--spec", str(spec))
    assert code == 0 and out.count("\n") == 2
    spec.write_text("{not json")
    assert call("table", "--spec", str(spec))[0] == 2


def test_version_and_help():
    assert call("--version")[0] == 0
    assert call()[0] == 2
