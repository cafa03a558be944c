import json
import subprocess
import sys

import pytest

from emltab.cli import main

EX1 = "~D{a,c}C{a,b}p & C{a,b}(p & q)"
CUT = "~D{a,b}p & ~D{a,c}~D{a}p"


def test_check_unsat(capsys):
    assert main(["check", EX1]) == 1
    assert capsys.readouterr().out.splitlines()[0] == "unsat"


def test_check_sat(capsys):
    assert main(["check", "p"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "sat"


def test_no_cut_warns_and_opens(capsys):
    assert main(["check", "--mode", "no-cut", CUT]) == 0
    assert "unsound" in capsys.readouterr().err
    assert main(["check", CUT]) == 1


def test_json_output(capsys):
    assert main(["check", "--json", "--trace", EX1]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] == "unsat" and out["witness_label"] is None
    assert out["mode"] == "restricted"
    assert out["stats"]["eliminated_e1"] == 1 and out["stats"]["eliminated_e2"] == 4
    assert len(out["trace"]) == 5


def test_json_sat_witness(capsys):
    assert main(["check", "--json", "p & q"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["witness_label"] == ["p", "q", "p & q"]


def test_set_input_file(tmp_path, capsys):
    f = tmp_path / "theta.txt"
    f.write_text("# example\n~D{a,c}C{a,b}p\nC{a,b}(p & q)\n")
    assert main(["check", "-f", str(f)]) == 1
    assert "prestates=5 states=5" in capsys.readouterr().out


def test_model_then_kripke_check(tmp_path, capsys):
    theta = "~C{a,b}p & D{a}q"
    assert main(["model", theta]) == 0
    text = capsys.readouterr().out
    model = tmp_path / "m.txt"
    model.write_text(text)
    witness = text.splitlines()[0].split()[-1]
    assert main(["check", "--kripke", str(model), "--state", witness, theta]) == 0
    assert capsys.readouterr().out.strip() == f"{witness}: true"


def test_model_of_unsat(capsys):
    assert main(["model", EX1]) == 1
    assert capsys.readouterr().out.strip() == "unsat"


def test_dot(tmp_path, capsys):
    assert main(["check", "--dot", "pretableau", "p"]) == 0
    assert capsys.readouterr().out.startswith("digraph pretableau")
    out = tmp_path / "t.dot"
    assert main(["dot", "--phase", "final", "-o", str(out), EX1]) == 1
    assert "color=grey" in out.read_text()


def test_oracle(capsys):
    assert main(["oracle", "--max-states", "2", "p & ~D{a}p"]) == 0
    assert "states: s0 s1" in capsys.readouterr().out
    assert main(["oracle", "p & ~p"]) == 1


def test_bench(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bench", "--count", "5", "--depth", "2", "--csv", str(out)]) == 0
    assert out.read_text().startswith("formula,mode,verdict")
    assert "restricted" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "p &"],
        ["check"],
        ["check", "--json", "--dot", "final", "p"],
        ["check", "--state", "s0", "p"],
        ["check", "--mode", "bogus", "p"],
        ["oracle", "--max-states", "9", "p"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_parse_error_reports_position(capsys):
    main(["check", "p & (q"])
    assert "position 6" in capsys.readouterr().err


def test_conflicting_input_sources(tmp_path, capsys):
    f = tmp_path / "t.txt"
    f.write_text("p\n")
    assert main(["check", "-f", str(f), "q"]) == 2


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "emltab", "check", "p"], capture_output=True, text=True
    )
    assert r.returncode == 0 and r.stdout.startswith("sat")
