import io
import json

import pytest

from involkit import _config
from involkit.cli import main
from involkit.field import GF
from involkit.matrix import parse_matrix
from involkit.preserver import map_from_closed_form, parse_form


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, [json.loads(line) for line in out.getvalue().splitlines()]


def test_rcf_examples():
    code, [rep] = run("rcf", "GF(2):[[1,1,0],[0,1,0],[0,0,1]]")
    assert code == 0 and rep["results"]["divisors"] == ["x+1", "x^2+1"]
    assert list(rep) == ["command", "inputs", "results", "checks", "elapsed_ms"]
    _, [rep] = run("rcf", "GF(3):[[1,0],[0,1]]")
    assert rep["results"]["divisors"] == ["x+2", "x+2"]
    _, [rep] = run("rcf", "GF(7):[[2,0],[0,4]]")
    assert sorted(rep["results"]["divisors"]) == ["x+3", "x+5"]


def test_member_and_decompose():
    code, [rep] = run("member", "B", "GF(3):[[0,1],[1,1]]")
    assert code == 0 and rep["results"]["member"] is False
    assert rep["results"]["method"] == "characterized"
    code, [rep] = run("decompose", "2", "GF(7):[[2,0],[0,4]]")
    assert code == 0 and len(rep["results"]["factors"]) == 2
    J1, J2 = (parse_matrix(t) for t in rep["results"]["factors"])
    assert J1 @ J2 == parse_matrix("GF(7):[[2,0],[0,4]]")
    code, [rep] = run("decompose", "2", "GF(3):[[0,1],[1,1]]")
    assert code == 1 and rep["checks"][0]["counterexample"]


def test_witness():
    code, [rep] = run("witness", "two", "--field", "GF(5)", "--a1", "0", "--r", "2")
    assert code == 0 and rep["checks"][0]["pass"]
    X = parse_matrix(rep["results"]["X"])
    assert X.trace() == 0
    code, [rep] = run("witness", "three", "--field", "GF(7)", "--a1", "2", "--alpha", "-1", "--r", "3")
    assert code == 0
    code, _ = run("witness", "type1", "--field", "GF(5)", "--poly", "poly[1,3,3,1]")
    assert code == 0
    code, [rep] = run("witness", "type2", "--field", "GF(5)", "--poly", "poly[1,0,1]")
    assert code == 1 and not rep["checks"][0]["pass"]
    code, _ = run("witness", "two", "--field", "GF(5)")
    assert code == 2


def test_enumerate():
    code, [rep] = run("enumerate", "all", "GF(2)", "2")
    assert code == 0 and rep["results"]["relation"] == "B=C=D" and rep["results"]["B"] == 6
    _, [rep] = run("enumerate", "all", "GF(3)", "3")
    assert rep["results"]["C=D"] is True
    _, [rep] = run("enumerate", "all", "--field", "GF(2)", "--n", "3")
    assert rep["results"]["relation"] == "B<C=D"
    _, [rep] = run("enumerate", "C", "GF(3)", "2")
    assert set(rep["results"]) >= {"C"} and "B" not in rep["results"]


def test_cap_flag_and_env(monkeypatch):
    code, [rep] = run("enumerate", "all", "GF(13)", "2")
    assert code == 3 and rep["results"]["error"] == "cap exceeded"
    code, _ = run("enumerate", "all", "GF(13)", "2", "--cap", "13")
    assert code == 0
    assert _config.census_cap() == _config.DEFAULT_CENSUS_CAP
    monkeypatch.setenv("INVOLKIT_CAP", "3")
    code, _ = run("enumerate", "all", "GF(5)", "2")
    assert code == 3


def test_preserver_commands():
    form = ("form{variant=congruence-pair, alpha=none, P=GF(3):[[1,1],[0,1]], "
            "Q=GF(3):[[1,0],[1,1]], transpose=false}")
    assert parse_form(form).Q.det() * parse_form(form).P.det() == 1
    code, [rep] = run("preserver", "check", form, "D", "exhaustive")
    assert code == 0 and rep["results"]["preserved"] is True
    code, [rep] = run("preserver", "check", form, "B", "--mode", "sample:30", "--seed", "3")
    assert code == 1 and rep["results"]["counterexample"]
    lin = map_from_closed_form(GF(7), 2, lambda X: X.scalar_mul(2)).text()
    code, [rep] = run("preserver", "check", lin, "D")
    assert code == 1 and rep["results"]["counterexample"] == "GF(7):[[1,0],[0,1]]"
    code, [rep] = run("preserver", "recognize", lin)
    assert code == 0 and rep["results"]["form"].startswith("form{variant=congruence-pair")
    code, _ = run("preserver", "check", form, "B", "--mode", "random")
    assert code == 2


def test_lambda():
    code, [rep] = run("lambda", "GF(3)", "2")
    assert code == 0 and rep["results"]["equals_D"] is True
    code, [rep] = run("lambda", "GF(7)", "3", "--member", "GF(7):[[6,0,0],[0,6,0],[0,0,6]]",
                      "--member", "GF(7):[[1,0,0],[0,1,0],[0,0,6]]")
    assert [v["member"] for v in rep["results"]["verdicts"]] == [True, False]
    code, _ = run("lambda", "GF(7)", "2", "--member", "GF(7):[[1]]")
    assert code == 2


def test_usage_errors():
    assert run("rcf", "GF(6):[[1]]")[0] == 2
    assert run("rcf", "not a matrix")[0] == 2
    assert run("member", "Q", "GF(7):[[1]]")[0] == 2
    assert run("verify", "no-such-claim")[0] == 2
    assert run()[0] == 2


def test_inputs_roundtrip():
    _, [rep] = run("member", "C", "GF(2^2);mod=[1,1,1]:[[1,0],[0,1]]")
    A = parse_matrix(rep["inputs"]["matrix"])
    assert A.text() == rep["inputs"]["matrix"]
    _, [rep] = run("rcf", "GF(9):[[[0,1],1],[0,1]]", "--mod", "[2,2,1]")
    assert parse_matrix(rep["inputs"]["matrix"]).spec.modulus_coeffs == (2, 2, 1)


def test_verify_single_claim_is_deterministic():
    first = run("verify", "char2-n2-collapse", "--seed", "4")
    second = run("verify", "char2-n2-collapse", "--seed", "4")
    strip = lambda reps: [{k: v for k, v in r.items() if k != "elapsed_ms"} for r in reps]
    assert first[0] == second[0] == 0
    assert strip(first[1]) == strip(second[1])
    assert first[1][0]["checks"][0]["claim"] == "char2-n2-collapse"
