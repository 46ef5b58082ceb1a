from __future__ import annotations

import json

import pytest

from turanlab import formulas as F
from turanlab.verify import GRIDS, VerifyError, grid, render_json, render_markdown, table_rows, verify_theorem


def test_alon_frankl_instance_confirmed():
    rep = verify_theorem("theorem-1.1", {"n": 6, "l": 2, "s": 1})
    assert rep["verdict"] == "confirmed"
    assert rep["search"]["optimum"] == 5 == F.alon_frankl_value(6, 2, 1)
    assert rep["count_matches_formula"]
    assert all(row["feasible"] for row in rep["constructions"])


def test_partite_instance_reports_without_failing():
    rep = verify_theorem("theorem-1.5", {"n": 6, "l": 3, "s": 1, "r": 3})
    main = rep["constructions"][0]
    assert main["name"] == "main-extremal" and main["feasible"] and main["edges"] == 6
    assert rep["formula"]["value"] == 6 and rep["formula"]["in_theorem_range"] == "unknown"
    assert rep["verdict"] in ("confirmed", "construction-suboptimal-at-this-n", "search-exceeds-formula")
    assert rep["search"]["optimum"] >= 6


def test_fano_instance_small_n():
    rep = verify_theorem("theorem-1.7", {"n": 6, "s": 1})
    assert rep["construction_count"] == 10 and rep["search"]["optimum"] == 10
    assert "outside-theorem-range" in rep["flags"]
    rep = verify_theorem("theorem-1.7", {"n": 5, "s": 2})
    # below the stated threshold a bigger Fano-free family exists
    assert rep["search"]["optimum"] == 10 > rep["construction_count"] == 9
    assert rep["verdict"] == "construction-suboptimal-at-this-n"


def test_conjecture_instance_counts():
    rep = verify_theorem("conjecture-4.1", {"n": 12, "l": 3, "s": 2, "r": 3})
    rows = {row["name"]: row for row in rep["constructions"]}
    assert rows["main-extremal"]["edges"] == 50 and rows["main-extremal"]["feasible"]
    w = rows["conjecture-witness"]
    assert w["edges"] == 51 and w["feasible"] and w["matching_number"] == 2
    assert rep["construction_count"] == 51
    assert rep["count_matches_formula"]
    assert "construction-exceeds-formula" in rep["flags"]
    assert rows["frankl-star"]["edges"] == 100 and rows["frankl-star"]["feasible"]
    assert "reference-construction-exceeds-formula" in rep["flags"]


def test_errors():
    with pytest.raises(VerifyError):
        verify_theorem("theorem-9", {"n": 5})
    with pytest.raises(VerifyError):
        verify_theorem("theorem-1.1", {"n": 5, "l": 2})
    with pytest.raises(VerifyError):
        grid("nope")


def test_out_of_budget_rows():
    rep = verify_theorem("theorem-1.5", {"n": 9, "l": 3, "s": 1, "r": 3})
    assert rep["search"] is None and rep["verdict"] is None
    assert "search-out-of-budget" in rep["flags"]


def test_small_grid_table():
    rows = table_rows(grid("theorem-1.1"))
    assert len(rows) == 10
    assert all(row["verdict"] == "confirmed" for row in rows)
    md = render_markdown(rows)
    assert md.count("\n") == 12
    js = json.loads(render_json(rows))
    assert js["rows"][0]["search"] == 2


def test_empty_table_has_header():
    md = render_markdown([])
    assert md.startswith("| theorem | params |") and md.count("\n") == 2
    assert json.loads(render_json([]))["rows"] == []


def test_conjecture_row_shows_excess():
    rows = table_rows(grid("conjecture-4.1"))
    assert rows[0]["formula"] == 50 and rows[0]["construction"] == 51
    assert rows[0]["search"] is None
    line = render_markdown(rows).splitlines()[2]
    assert "| 50 | 51 | - | - |" in line and "construction-exceeds-formula" in line


def test_every_grid_renders():
    for name in GRIDS:
        if name == "theorem-1.1-full":
            continue
        assert table_rows(grid(name))
