import json

from pfchi.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


def test_eval_sentences(capsys):
    assert run(capsys, "eval", "--q", "7", "--formula", "mu[5,2] x:K1. x = x") == (0, "true", "")
    code, out, _ = run(capsys, "eval", "--q", "7", "--formula", "x*x = 1", "--free", "x:K1", "--count-mod", "2")
    assert (code, out) == (0, "0")
    code, out, _ = run(capsys, "eval", "--q", "8", "--formula", "mu[2,1] x:K1. x = x")
    assert (code, out) == (0, "false")


def test_eval_counts_json(capsys):
    code, out, _ = run(capsys, "--output", "json", "eval", "--q", "5", "--formula", "exists y:K1. y*y = x", "--free", "x:K1")
    assert code == 0 and json.loads(out) == 3


def test_parse_errors_exit_1(capsys):
    code, _, err = run(capsys, "eval", "--q", "7", "--formula", "x = ")
    assert code == 1 and "parse error" in err
    assert run(capsys, "eval", "--q", "7", "--formula", "exists x:K0. x = x")[0] == 1
    assert run(capsys, "zeta", "--q", "5", "--curve", "y^3 = x")[0] == 1
    assert run(capsys, "zeta", "--q", "5")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_zeta_of_a_curve(capsys):
    code, out, _ = run(capsys, "--output", "json", "zeta", "--q", "5", "--curve", "y^2 = x^3 + x")
    assert code == 0
    assert json.loads(out) == {"q": 5, "A": [1, -6, 5], "B": [1, -2, 5]}


def test_chi_and_dualchi(capsys):
    code, out, _ = run(capsys, "--output", "json", "chi", "--curve", "y^2 = x^3 + x", "--q", "5", "--moduli", "9")
    assert code == 0 and json.loads(out) == {"9": 4}
    code, out, _ = run(capsys, "--output", "json", "chi", "--curve", "y^2 = x^3 + x", "--q", "5", "--moduli", "5,25,45")
    assert json.loads(out) == {"5": 4, "25": 14, "45": 4}
    assert run(capsys, "dualchi", "--curve", "y^2 = x^3 + x", "--q", "5")[:2] == (0, "4/5")
    assert run(capsys, "dualchi", "--builtin", "gm", "--q", "7")[:2] == (0, "-6/7")


def test_csv_output(capsys):
    code, out, _ = run(capsys, "--output", "csv", "chi", "--curve", "y^2 = x^3 + x", "--q", "5", "--moduli", "5,9")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "key,value" and "9,4" in lines


def test_variety_file(capsys, tmp_path):
    path = tmp_path / "p1.var"
    path.write_text("ambient = projective 2\nvars = X, Y\nbase = 3^1\n")
    code, out, _ = run(capsys, "--output", "json", "zeta", "--file", str(path), "--genus", "0")
    assert code == 0 and json.loads(out)["B"] == [1]
    assert run(capsys, "zeta", "--file", str(path), "--q", "5")[0] == 1


def test_singular_curve_is_an_evaluation_error(capsys):
    code, _, err = run(capsys, "zeta", "--q", "5", "--curve", "y^2 = x^3")
    assert code == 2 and "singular" in err


def test_resource_bound_exits_3(capsys):
    code, _, err = run(capsys, "dualchi", "--builtin", "legendre-surface", "--q", "13")
    assert code == 3 and "resource bound" in err
    assert run(capsys, "--bound", "10", "chi", "--builtin", "legendre-surface", "--q", "5", "--moduli", "2")[0] == 3
    # the bound is scoped to the command
    assert run(capsys, "chi", "--builtin", "legendre-surface", "--q", "5", "--moduli", "2")[0] == 0


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "trace-count", "--q-max", "7", "--curves", "3")
    assert code == 0 and out.endswith("checks passed")
    assert run(capsys, "verify", "--suite", "trace-count-p", "--q-max", "9", "--curves", "3")[0] == 0
    assert run(capsys, "verify", "--suite", "axioms", "--q-max", "7")[0] == 0


def test_verify_failure_exits_4(capsys, monkeypatch):
    from pfchi import cli
    from pfchi.euler import Report

    def broken(*a, **kw):
        rep = Report()
        rep.add(4, "trace-count[forced]", 1, 2)
        return rep

    monkeypatch.setattr(cli, "verify_trace_count", broken)
    code, out, _ = run(capsys, "verify", "--suite", "trace-count", "--q-max", "5", "--curves", "1")
    assert code == 4 and "FAIL" in out
