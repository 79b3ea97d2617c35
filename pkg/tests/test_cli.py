import json

import pytest

from blc import cli
from blc.nd import fixtures


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return _write


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out.strip()


def test_parse_prints_canonical_form(capsys, write):
    f = write("id.blc", "\\x : o .  x")
    assert run(capsys, "parse", f) == (0, "\\x:o. x")


def test_parse_json(capsys, write):
    f = write("id.blc", "\\x:o. x")
    code, out = run(capsys, "parse", "--json", f)
    assert code == 0 and json.loads(out)["v"] == "blc-ast/1"


def test_check(capsys, write):
    f = write("id.blc", "\\x:o. x")
    assert run(capsys, "check", f) == (0, "expr : o -> o")


def test_check_with_environment(capsys, write):
    f = write("open.blc", "< x | 'a >")
    assert run(capsys, "check", "--env", "x:o, 'a:o", f) == (0, "cmd : ok")


def test_eval_trace(capsys, write):
    f = write("c.blc", "< (\\x:o. x) #c:o | @o >")
    code, out = run(capsys, "eval", "--trace", f)
    lines = out.splitlines()
    assert code == 0 and lines[-1] == "< #c:o | @o >"
    assert "beta-lam" in lines[0]


def test_eq_verdicts(capsys, write):
    a = write("a.blc", "\\x:o. x")
    b = write("b.blc", "\\y:o. (\\z:o. z) y")
    c = write("c.blc", "\\y:o. #c:o")
    assert run(capsys, "eq", a, b) == (0, "EQUAL")
    # differing bodies under a binder are not observable without a context
    assert run(capsys, "eq", a, c)[0] == 2
    assert run(capsys, "eq", write("d.blc", "#c:o"), write("e.blc", "#d:o")) == (1, "DISTINCT")


def test_translate_both_ways(capsys, write):
    f = write("id.blc", "(#c:o, #d:p)")
    assert run(capsys, "translate", "--to", "dc", f) == (0, "(cst$c_o, cst$d_p)")
    g = write("id.dc", "(cst$c_o, cst$d_p)")
    assert run(capsys, "translate", "--to", "blc", g) == (0, "(#c:o, #d:p)")


def test_parse_error_exit_code(capsys, write):
    code, _ = run(capsys, "parse", write("bad.blc", "\\x:o."))
    assert code == 3


def test_type_error_exit_code(capsys, write):
    code, _ = run(capsys, "check", write("bad.blc", "#c:o #c:o"))
    assert code == 4


def test_fuel_exit_code(capsys, write):
    f = write("c.blc", "< (\\x:o. x) ((\\y:o. y) #c:o) | @o >")
    code, _ = run(capsys, "eval", "--fuel", "1", f)
    assert code == 5


def test_usage_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["translate"])
    assert exc.value.code == 64


def test_nd_check(capsys, write, tmp_path):
    fx = fixtures()[0]
    src = tmp_path / "fx.json"
    from blc.nd import derivation_to_json

    doc = {"v": "bind-deriv/1", "name": fx.name, "derivation": derivation_to_json(fx.derivation)}
    src.write_text(json.dumps(doc))
    code, out = run(capsys, "nd", "check", str(src))
    assert code == 0 and out.startswith("ACCEPTED")
    doc["derivation"]["conclusion"] = "+ a0 <- a1"
    src.write_text(json.dumps(doc))
    code, out = run(capsys, "nd", "check", str(src))
    assert code == 1 and out.startswith("REJECTED")


def test_selftest_subset_with_report(capsys, tmp_path):
    code, out = run(capsys, "selftest", "--suite", "2", "--suite", "nd-fixtures", "--count", "20", "--report-dir", str(tmp_path))
    assert code == 0
    assert out.count("PASS") == 2
    assert (tmp_path / "results.tsv").exists() and (tmp_path / "counts.png").exists()


def test_selftest_json(capsys):
    code, out = run(capsys, "selftest", "--suite", "parse-roundtrip", "--count", "5", "--json")
    rows = json.loads(out)
    assert code == 0 and rows[0]["criterion"] == 1 and rows[0]["ok"]


def test_selftest_unknown_suite(capsys):
    code, _ = run(capsys, "selftest", "--suite", "nope")
    assert code == 64
