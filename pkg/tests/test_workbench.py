import json

import numpy as np
import pytest

from hopfcross.catalog import DEFAULT_CATALOG, fixture_names, fixture_path, resolve_path
from hopfcross.errors import InvalidInputError
from hopfcross.workbench import coaction_document, dumps, load, parse_document, parse_text

SWAP = {
    "name": "swap",
    "group": {"builtin": "Z2"},
    "algebra": {"blocks": [1, 1]},
    "action": {"matrices": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]},
}


def errors_of(doc):
    with pytest.raises(InvalidInputError) as info:
        parse_document(doc)
    return info.value.errors


def test_fixtures_cover_catalog():
    assert set(DEFAULT_CATALOG) <= set(fixture_names())


def test_parse_group_action():
    wb = parse_document(SWAP)
    assert wb.coaction.dim_a == 2 and wb.coaction.N == 2
    assert wb.coaction.group_action is not None


def test_non_multiplicative_action_located():
    doc = dict(SWAP, action={"matrices": [[[1, 0], [0, 1]], [[1, 1], [0, 1]]]})
    (msg,) = errors_of(doc)
    assert msg.startswith("$.action: automorphism check failed")


def test_all_errors_reported_with_paths():
    doc = {"group": {"order": 2, "table": [[0, 1], [1, 1]]}, "algebra": {"blocks": [0]},
           "tolerance": {"eq_tol": -1}}
    errs = errors_of(doc)
    assert "$.group.table: not a group: no inverse for 1" in errs
    assert any(e.startswith("$.algebra.blocks") for e in errs)
    assert any(e.startswith("$.tolerance.eq_tol") for e in errs)


def test_invalid_json_reports_position():
    with pytest.raises(InvalidInputError) as info:
        parse_text("{nope")
    assert "line 1 column 2" in info.value.errors[0]


def test_complex_and_sparse_arrays():
    # Ad(diag(1, i)) on M2, written with [re, im] pairs for the unitaries
    doc = {"name": "phase", "group": {"builtin": "Z4"}, "algebra": {"blocks": [2]},
           "action": {"unitaries": [[[1, 0], [0, 0], [0, 0], [d, e]]
                                    for d, e in ((1, 0), (0, 1), (-1, 0), (0, -1))]}}
    wb = parse_document(doc)
    assert wb.coaction.N == 4
    sparse = {"shape": [2, 2, 2], "entries": [[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1, 0]]}
    doc2 = dict(SWAP, action={"matrices": sparse})
    assert np.allclose(parse_document(doc2).coaction.matrix, parse_document(SWAP).coaction.matrix)


def test_tolerance_override():
    wb = parse_document(SWAP, tol_override={"eq_tol": 1e-6})
    assert wb.cfg.eq_tol == 1e-6


def test_emit_round_trip(catalog):
    for name in ("swap-c2", "pauli-m2", "grading-m2"):
        c = catalog[name]
        text = dumps(coaction_document(c, name=name))
        back = parse_text(text).coaction
        assert np.allclose(back.matrix, c.matrix)
        assert np.allclose(back.hopf0.comult, c.hopf0.comult)
        assert json.loads(text)["name"] == name


def test_load_falls_back_to_builtin_fixture(tmp_path):
    assert resolve_path("swap-c2.json") == fixture_path("swap-c2")
    wb = load("swap-c2.json")
    assert wb.name == "swap-c2"
    p = tmp_path / "x.json"
    p.write_text(json.dumps(SWAP))
    assert load(p).name == "swap"
