import io
import json
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from comet import derived
from comet.cli import main

CORPUS = Path(__file__).resolve().parents[1] / "src" / "comet" / "corpus"
DISEASE = f"{CORPUS}/disease.comet"
BURGLARY = f"{CORPUS}/burglary.comet"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def source(tmp_path):
    def write(text, name="prog.comet"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_check_ok():
    assert run("check", DISEASE) == (0, "", "")
    assert run("check", BURGLARY)[0] == 0


def test_check_empty_file(source):
    assert run("check", source("")) == (0, "", "")


def test_check_linearity(source):
    code, out, err = run("check", source("def bad(x : 2) : 2 (x) 2 = let z = x in z (x) z\n"))
    assert code == 2
    assert "LinearityViolation" in err and "[Tpair]" in err


def test_check_parse_error(source):
    code, _, err = run("check", source("def s : 2 = (0.5\n"))
    assert code == 1 and "ParseError" in err


def test_missing_file():
    assert run("check", "does/not/exist.comet")[0] == 1


def test_eval():
    code, out, _ = run("eval", DISEASE, "--def", "subject")
    assert code == 0
    assert out.splitlines() == ["inl * : 1/100 (0.01)", "inr * : 99/100 (0.99)"]


def test_eval_scalar(source):
    code, out, _ = run("eval", source("def u : 2 = 1/2\n"), "--def", "u")
    assert out.splitlines() == ["inl * : 1/2 (0.5)", "inr * : 1/2 (0.5)"]


def test_eval_joint_prior():
    code, out, _ = run("--format", "structured", "eval", BURGLARY, "--def", "b (x) e")
    rows = json.loads(out)["distribution"]
    got = sorted(F(r["weight"]["num"], r["weight"]["den"]) for r in rows)
    assert got == sorted(p * q for p in (F("0.001"), F("0.999")) for q in (F("0.002"), F("0.998")))


def test_eval_not_closed():
    code, _, err = run("eval", DISEASE, "--def", "positive_result")
    assert code == 3 and "NotClosed" in err


def test_infer_text():
    code, out, _ = run("infer", DISEASE, "--state", "subject", "--pred", "positive_result")
    assert code == 0
    assert "inl * : 25/322 (0.07763975155)" in out
    assert "validity: 322/3125 (0.10304)" in out
    assert "witness: n = 10" in out


def test_infer_marginal_structured():
    code, out, _ = run("--format", "structured", "infer", BURGLARY, "--state", "b (x) e", "--pred", "j . a",
                       "--marginal", "1")
    data = json.loads(out)
    top = data["marginal"]["distribution"][0]["weight"]
    assert data["marginal"]["side"] == 1
    assert abs(F(top["num"], top["den"]) - F("0.01628373")) <= F(5, 10**9)
    assert data["witness"] == 20
    assert data["program"] == "burglary"


def test_infer_top_unchanged():
    code, out, _ = run("--format", "structured", "infer", DISEASE, "--state", "subject", "--pred", "top")
    data = json.loads(out)
    assert data["posterior"] == data["weights"]


def test_infer_zero_mass():
    code, _, err = run("infer", DISEASE, "--state", "subject", "--pred", "bot")
    assert code == 4 and "ZeroMass" in err


def test_structured_error():
    code, out, _ = run("--format", "structured", "eval", DISEASE, "--def", "positive_result")
    assert code == 3 and json.loads(out)["error"]["kind"] == "NotClosed"


def test_run_queries():
    code, out, _ = run("run", BURGLARY)
    assert code == 0
    assert [l for l in out.splitlines() if l.startswith("query")] == [
        "query eval b (x) e", "query validity b (x) e given j . a", "query infer b (x) e given j . a marginal 1",
    ]


def test_laws_smoke():
    code, out, _ = run("laws", "--instances", "1")
    assert code == 0 and "0 failures" in out


def test_laws_deterministic():
    a = run("--format", "structured", "laws", "--seed", "3", "--instances", "2", "--law", "and")
    b = run("--format", "structured", "laws", "--seed", "3", "--instances", "2", "--law", "and")
    assert a == b


def test_laws_failure_exit(monkeypatch):
    monkeypatch.setattr(derived, "andthen", lambda p, q: p)
    code, out, _ = run("laws", "--instances", "50", "--law", "and.commutative")
    assert code == 5 and "counterexample" in out


def test_laws_bad_selection():
    assert run("laws", "--law", "nope")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "comet", "check", DISEASE], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == ""
