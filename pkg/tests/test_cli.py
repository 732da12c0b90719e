import io
import json

from heiscat.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_normalize_text():
    code, out = run("normalize", "xpos(1);xpos(1)")
    assert code == 0
    assert out.strip() == "(z) * [up up: xpos(1)] + (1) * [Id]"


def test_normalize_zigzag_and_empty():
    assert run("normalize", "up|cupR(1) ; capR(1)|up")[1].strip() == "(1) * [Id]"
    assert run("normalize", "1")[1].strip() == "1"


def test_normalize_json_and_specialize():
    code, out = run("normalize", "--format", "json", "--specialize", "3,2", "-k", "1", "up: cupL(1); xneg(2); capR(1)")
    assert code == 0
    assert json.loads(out)["terms"] == []
    code, out = run("normalize", "--specialize", "3,2", "xpos(1);xpos(1)")
    assert out.strip() == "(3) * [up up: xpos(1)] + (1) * [Id]"


def test_normalize_tikz():
    code, out = run("normalize", "--format", "tikz", "xpos(1)")
    assert code == 0 and "tikzpicture" in out


def test_bad_input_exit_code(capsys):
    assert run("normalize", "up: frob(1)")[0] == 2
    assert run("normalize", "--specialize", "0,1", "xpos(1)")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("algebra", "-A", "/nonexistent.json")[0] == 2


def test_budget_exit_code(monkeypatch):
    monkeypatch.setenv("HEISCAT_STEP_BUDGET", "3")
    assert run("normalize", "-k", "2", "up up up: xpos(1); dot(3,2); xpos(2); xpos(1); xneg(2)")[0] == 3


def test_algebra():
    code, out = run("algebra", "-A", "M2", "E12", "E21")
    assert code == 0
    assert out.splitlines()[0] == "E11"
    code, out = run("algebra", "-A", "dual")
    assert "dimension 2" in out


def test_wreath():
    assert run("wreath", "-n", "2", "s1*s1")[1].strip() == "1 + z * s1"
    assert run("wreath", "-n", "2", "s1*x1*s1")[1].strip() == "x2"


def test_wreath_cyclotomic(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"level": 2, "coefficients": [["1"], ["0"], ["t^2"]]}))
    code, out = run("wreath", "-n", "1", "--cyclotomic", str(path), "x1^3")
    assert code == 0 and out.strip() == "-t^2 * x1"


def test_verify_suites():
    code, out = run("verify", "relations", "-A", "trivial", "-k", "0", "--relation", "skein")
    assert code == 0 and out.strip() == "relations: 1/1 passed"
    code, out = run("verify", "cyclotomic", "-l", "2", "-n", "2", "--samples", "5", "--format", "json")
    assert code == 0 and json.loads(out)["ok"]
    code, out = run("verify", "independence", "-v")
    assert code == 0 and out.startswith("PASS")
