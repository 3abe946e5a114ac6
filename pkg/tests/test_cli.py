import io
import json

from hopfcross import cli
from hopfcross.errors import InconsistencyError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_validate_builtin_fixture():
    code, out, err = run("validate", "swap-c2.json")
    assert code == 0
    rep = json.loads(out)
    assert rep["valid"] and rep["input"] == "swap-c2"
    assert "runtime" in err


def test_free_and_outer_reports():
    code, out, _ = run("free", "ad-diag-m2.json")
    rep = json.loads(out)
    assert code == 0 and rep["free"] is False and rep["agreement"] is True
    code, out, _ = run("outer", "ad-diag-m2.json")
    rep = json.loads(out)
    assert rep["verdict"] == "not_outer" and rep["witness"]["verified"]
    code, out, _ = run("outer", "swap-c2.json", "--no-shortcut")
    assert json.loads(out)["verdict"] == "outer"


def test_saturated_rank_vectors():
    _, out, _ = run("saturated", "trivial-c-z2.json")
    rep = json.loads(out)
    assert rep["saturated"] is False
    assert rep["rank_vector_dual_image"] == [1, 0, 0, 1]
    assert rep["rank_vector_trivial_image"] == [1, 0, 1, 0]


def test_crossed_emit_round_trip(tmp_path):
    target = tmp_path / "dual.json"
    code, out, _ = run("crossed", "swap-c2.json", "--emit", str(target))
    rep = json.loads(out)
    assert code == 0 and rep["blocks"] == [2] and rep["expectation"]["ok"]
    code, out, _ = run("free", str(target))
    rep = json.loads(out)
    assert code == 0 and rep["free"] is False and rep["intertwiner_dim"] == 2


def test_other_commands():
    _, out, _ = run("commutant", "swap-c2.json")
    assert json.loads(out)["dimensions_equal"]
    _, out, _ = run("cond-exp", "z3-shift-c3.json")
    assert json.loads(out)["unique"]
    _, out, _ = run("rokhlin-diagnostic", "swap-c2.json")
    assert json.loads(out)["subset"] == [0]


def test_invalid_input_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"group": {"order": 2, "table": [[0, 1], [1, 1]]}}')
    code, out, err = run("validate", str(bad))
    assert code == 2 and out == ""
    assert "$.group.table: not a group: no inverse for 1" in err
    code, _, err = run("validate", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, _ = run("free", "swap-c2.json", "--tol", "-3")
    assert code == 2
    code, _, _ = run("no-such-command")
    assert code == 2


def test_inconsistency_exit_code(monkeypatch):
    def broken(*args, **kwargs):
        raise InconsistencyError("routes disagree")

    monkeypatch.setattr(cli, "is_free", broken)
    code, out, err = run("free", "swap-c2.json")
    assert code == 1 and out == ""
    assert "consistency violation: routes disagree" in err


def test_tolerance_option_accepted():
    code, out, _ = run("free", "swap-c2.json", "--tol", "1e-6", "--eq-tol", "1e-7")
    assert code == 0 and json.loads(out)["free"]


def test_suite_subset():
    code, out, _ = run("suite", "swap-c2.json", "trivial-c-z2.json")
    rep = json.loads(out)
    assert code == 0 and rep["all_pass"]
    assert [e["name"] for e in rep["entries"]] == ["swap-c2", "trivial-c-z2"]
