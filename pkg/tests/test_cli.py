import io
import json

import pytest

from siegel_hecke.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


def test_verify_counts():
    code, js = run_json("verify", "counts", "--p", "2", "--n", "2")
    assert code == 0 and js["passed"] and js["checks"] > 0
    assert js["schema"] == "siegel-hecke/1" and len(js["reports"]) == 1


def test_verify_intertwine_tj():
    code, js = run_json("verify", "intertwine-tj", "--rank", "1", "--p", "2", "--j", "1")
    assert code == 0 and js["passed"]


def test_verify_multiplicity():
    code, js = run_json("verify", "multiplicity", "--N", "6", "--n", "2", "--records")
    assert code == 0
    recs = js["reports"][0]["records"]
    assert recs[0]["s"] == 0 and recs[0]["closed_form"] == 16


@pytest.mark.parametrize("suite", ["intertwine-tp", "projection-classes", "coeff-derivation",
                                   "reps", "no-self-intersection", "remark-identity"])
def test_other_suites(suite):
    code, js = run_json("verify", suite, "--count", "2", "--n", "2")
    assert code == 0 and js["passed"]


def test_seed_gives_identical_output():
    a = run("verify", "projection-classes", "--rank", "2", "--count", "2", "--seed", "5")
    b = run("verify", "projection-classes", "--rank", "2", "--count", "2", "--seed", "5")
    assert a == b


def test_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"primes": [3], "count": 1, "rank": 2}))
    code, js = run_json("verify", "intertwine-tp", "--config", str(cfg))
    assert code == 0 and [r["params"]["p"] for r in js["reports"]] == [3]
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run("verify", "counts", "--config", str(cfg))[0] == 2


def test_budget_exit_code(monkeypatch):
    assert run("verify", "counts", "--n", "2", "--budget", "4")[0] == 3
    monkeypatch.setenv("SIEGEL_HECKE_BUDGET", "4")
    assert run("verify", "counts", "--n", "2")[0] == 3
    assert run("verify", "counts", "--n", "2", "--budget", "1000")[0] == 0


def test_usage_errors():
    assert run("verify", "bogus")[0] == 2
    assert run("cusps", "list", "--N", "12", "--n", "2", "--r", "1")[0] == 2
    assert run("eigenvalue", "tp", "--n", "2", "--r", "0", "--N", "6", "--k", "4", "--p", "2")[0] == 2


def test_failed_suite_exit_code(monkeypatch):
    import siegel_hecke.verify as V
    from siegel_hecke.hecke import c_tp
    monkeypatch.setattr(V, "c_tp", lambda n, p="P", x=None: c_tp(n + 1, p))
    code, js = run_json("verify", "intertwine-tp", "--rank", "1", "--count", "1")
    assert code == 1 and not js["passed"] and "first_failure" in js


def _table(tmp_path, entries, degree=1):
    f = tmp_path / "t.json"
    f.write_text(json.dumps({"degree": degree, "entries": entries}))
    return str(f)


def test_hecke_empty_table(tmp_path):
    code, js = run_json("hecke", "--table", _table(tmp_path, []), "--op", "tp", "--p", "2")
    assert code == 0 and js["table"]["entries"] == []


def test_hecke_degree1_matches_recursion(tmp_path, tau):
    entries = [{"gram": [[2 * m]], "value": tau[m]} for m in range(1, 21)]
    grams = json.dumps([[[2 * m]] for m in range(1, 11)])
    code, js = run_json("hecke", "--table", _table(tmp_path, entries), "--op", "tp", "--p", "2",
                        "--k", "12", "--chi", "1", "--gram", grams)
    assert code == 0
    got = {e["gram"][0][0] // 2: int(e["value"]["terms"][0]["num"]) if e["value"]["terms"] else 0
           for e in js["table"]["entries"]}
    for m in range(1, 11):
        want = tau[2 * m] + (2 ** 11 * tau[m // 2] if m % 2 == 0 else 0)
        assert got[m] == want == -24 * tau[m]


def test_hecke_tj_and_errors(tmp_path):
    entries = [{"gram": [[2, 1], [1, 2]], "value": 1}]
    path = _table(tmp_path, entries, degree=2)
    code, js = run_json("hecke", "--table", path, "--op", "tj", "--p", "2", "--j", "0")
    assert code == 0
    assert run("hecke", "--table", path, "--op", "tj", "--p", "2")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"degree": 1,\n "entries": [}')
    code, _ = run("hecke", "--table", str(bad), "--op", "tp", "--p", "2")
    assert code == 2
    odd = _table(tmp_path, [{"gram": [[3]], "value": 1}])
    assert run("hecke", "--table", odd, "--op", "tp", "--p", "2")[0] == 2


def test_cusps_commands():
    code, text = run("cusps", "list", "--N", "6", "--n", "2", "--r", "1", "--format", "csv")
    assert code == 0 and len(text.strip().splitlines()) == 1 + 4
    code, js = run_json("cusps", "list", "--N", "6", "--n", "2", "--r", "1")
    assert js["count"] == 4
    code, text = run("cusps", "incidence", "--N", "1", "--n", "2", "--format", "dot")
    assert code == 0 and text.count("->") == 1 and text.count("[label") == 2
    code, js = run_json("cusps", "rep", "--tuple", "2,3")
    assert js["similitude"] == 1 and js["rank_profile"] == {"2": 2, "3": 1}


def test_eigenvalue_commands():
    code, js = run_json("eigenvalue", "tp", "--n", "2", "--r", "0", "--N", "1", "--k", "4", "--p", "2")
    assert code == 0 and js["value"] == 45
    code, js = run_json("eigenvalue", "tp", "--n", "3", "--r", "1", "--cusp", "2,3", "--N", "6",
                        "--k", "12", "--p", "5", "--lambda", "-24")
    assert code == 0 and "value" in js and js["parity_ok"]
    code, js = run_json("eigenvalue", "tj", "--n", "2", "--r", "1", "--j", "1", "--N", "1",
                        "--k", "12", "--p", "2", "--lambda", "-24")
    assert js["value"] == 512 * (1048833 - 1048512)
    code, js = run_json("eigenvalue", "tj", "--n", "2", "--r", "1", "--j", "1", "--N", "1")
    assert code == 0 and "value" not in js
    assert run("eigenvalue", "tj", "--n", "2", "--r", "1", "--N", "1")[0] == 2
