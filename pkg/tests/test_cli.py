import csv
import io
import json
from fractions import Fraction

import pytest

from nonnegcount import cli, set_engine
from nonnegcount.ledger import Check


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out else None), err


def test_identities(capsys):
    code, rep, _ = run_json(capsys, "identities", "--q-max", "3", "--a-max", "12", "--b-max", "15")
    assert code == 0 and rep["passed"]
    assert {c["paper_anchor"] for c in rep["checks"]} >= {"qpascal"}
    assert all(c["lhs"] == 0 for c in rep["checks"])


def test_empty_identity_range(capsys):
    assert run(capsys, "identities", "--a-max", "0")[0] == 0


@pytest.mark.parametrize("argv", [["identities", "--bogus"], ["nosuch"], [], ["search", "--n", "8", "--k", "2", "--grid"]])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize("mode,extra", [("vector", ["--q", "2", "--n", "5", "--k", "2"]), ("set", ["--n", "8", "--k", "3"])])
def test_eigencheck(capsys, mode, extra):
    code, rep, _ = run_json(capsys, "eigencheck", "--mode", mode, *extra, "--trials", "5")
    assert code == 0 and rep["passed"]
    assert len(rep["checks"]) == int(extra[-1])


def test_eigencheck_j0_and_cap(capsys):
    assert run(capsys, "eigencheck", "--n", "4", "--k", "2", "--j", "0", "--trials", "3")[0] == 0
    code, _, err = run(capsys, "eigencheck", "--n", "20", "--k", "5", "--trials", "1")
    assert code == 2 and "error" in err


@pytest.mark.parametrize("q,n,k,blocks", [(2, 5, 2, 8), (2, 4, 2, 4), (3, 5, 2, 27), (3, 6, 2, 90)])
def test_spread(capsys, tmp_path, q, n, k, blocks):
    emit = tmp_path / "s.json"
    code, rep, _ = run_json(capsys, "spread", "--q", str(q), "--n", str(n), "--k", str(k), "--emit", str(emit))
    assert code == 0 and rep["blocks"] == blocks and rep["violations"] == []
    assert len(json.loads(emit.read_text())["blocks"]) == blocks


def _weighting_file(capsys, tmp_path, *argv):
    path = tmp_path / "w.json"
    assert run(capsys, "weighting", *argv, "--out", str(path))[0] == 0
    return str(path)


def test_verify_vector_star(capsys, tmp_path):
    path = _weighting_file(capsys, tmp_path, "--mode", "vector", "--n", "6")
    code, rep, _ = run_json(capsys, "verify", "--mode", "vector", "--input", path, "--k", "2", "--ledger")
    assert code == 0 and rep["count"] == 31 and rep["equality"] and rep["theorem_holds"]
    assert rep["star_point"] == [0, 0, 0, 0, 0, 1]
    assert any(c["id"] == "packing" for c in rep["checks"])


def test_verify_set(capsys, tmp_path):
    path = _weighting_file(capsys, tmp_path, "--mode", "set", "--n", "32")
    code, rep, _ = run_json(capsys, "verify", "--mode", "set", "--input", path, "--k", "2")
    assert code == 0 and rep["count"] == 31 and rep["star_on_x1"]
    path = _weighting_file(capsys, tmp_path, "--mode", "set", "--kind", "random", "--n", "32", "--seed", "4")
    code, rep, _ = run_json(capsys, "verify", "--mode", "set", "--input", path, "--k", "2", "--ledger")
    assert code == 0 and rep["count"] >= 31 and not rep["equality"]


def test_verify_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"x": [1, 1]}')
    assert run(capsys, "verify", "--mode", "set", "--input", str(bad), "--k", "1")[0] == 2
    assert run(capsys, "verify", "--mode", "set", "--input", str(tmp_path / "missing.json"), "--k", "1")[0] == 2
    garbage = tmp_path / "g.json"
    garbage.write_text("{not json")
    assert run(capsys, "verify", "--mode", "set", "--input", str(garbage), "--k", "1")[0] == 2
    small = _weighting_file(capsys, tmp_path, "--mode", "set", "--n", "10")
    assert run(capsys, "verify", "--mode", "set", "--input", small, "--k", "2")[0] == 2


def test_verify_reports_failure_with_exit_1(capsys, tmp_path, monkeypatch):
    real = set_engine.theorem_check_set

    def broken(x, k, ledger=True):
        rep = real(x, k, ledger)
        rep.count = rep.bound - 1
        rep.ledger = [Check("count", "thm:quadratic", rep.count, rep.bound, ">=")]
        return rep

    monkeypatch.setattr(set_engine, "theorem_check_set", broken)
    path = _weighting_file(capsys, tmp_path, "--mode", "set", "--n", "32")
    code, out, err = run(capsys, "verify", "--mode", "set", "--input", path, "--k", "2")
    assert code == 1 and "COUNT BOUND VIOLATED" in err
    assert json.loads(out)["passed"] is False


def test_search_grid(capsys):
    code, rep, _ = run_json(capsys, "search", "--n", "8", "--k", "2", "--grid", "8", "--jobs", "2")
    assert code == 0 and rep["min_count"] == 7 and rep["witness_is_star"]
    assert sum(Fraction(v) for v in rep["witness"]["x"]) == 0


def test_search_two_value(capsys):
    code, rep, _ = run_json(capsys, "search", "--n", "22", "--k", "7", "--two-value")
    assert code == 0 and 19 in rep["below_target"] and rep["target"] == 54264
    code, rep, _ = run_json(capsys, "search", "--mode", "vector", "--n", "3", "--k", "2", "--two-value", "--trials", "5")
    assert code == 0 and rep["below_target"]


def test_search_errors(capsys):
    assert run(capsys, "search", "--n", "13", "--k", "2", "--grid", "2")[0] == 2
    assert run(capsys, "search", "--mode", "vector", "--n", "3", "--k", "2", "--grid", "2")[0] == 2
    assert run(capsys, "search", "--n", "8", "--k", "2", "--grid", "2", "--jobs", "0")[0] == 2


def test_csv_output(capsys):
    code, out, _ = run(capsys, "spread", "--q", "2", "--n", "4", "--k", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and {r["id"] for r in rows} == {"size", "violations"}
    assert all(r["pass"] == "true" for r in rows)
    code, out, _ = run(capsys, "weighting", "--mode", "set", "--n", "4", "--format", "csv")
    assert out.splitlines()[0] == "key,value"


def test_out_file_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "eigencheck", "--n", "4", "--k", "2", "--trials", "4", "--seed", "9", "--out", str(path))[0] == 0
    assert a.read_text() == b.read_text()
    assert run(capsys, "weighting", "--mode", "vector", "--kind", "random", "--n", "4", "--seed", "3")[1] == run(
        capsys, "weighting", "--mode", "vector", "--kind", "random", "--n", "4", "--seed", "3"
    )[1]
