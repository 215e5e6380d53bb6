import json
import subprocess
import sys

import pytest

from slopelab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_kottwitz(capsys):
    code, out, _ = run(capsys, "kottwitz", "--rank", "2", "--mu", "0,1")
    assert code == 0
    assert json.loads(out) == [["0", "1"], ["1/2", "1/2"]]


def test_np_dominance_with_negative_values(capsys):
    code, out, _ = run(capsys, "np", "dominance", "--a", "-1/2,-1/2", "--b", "-1,0")
    assert (code, out.strip()) == (0, "DominatesOrEqual")


def test_np_other_commands(capsys):
    code, out, _ = run(capsys, "np", "negate", "--m", "0,1")
    assert code == 0 and json.loads(out)
    code, out, _ = run(capsys, "np", "preceq", "--f", "0,1", "--g", "1/2,1/2")
    assert code == 0 and json.loads(out) is True


def test_slopes_from_file(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"p": 5, "a": 1, "rank": 2, "matrix": [["0", "5"], ["1", "0"]]}))
    code, out, _ = run(capsys, "slopes", str(f))
    assert code == 0 and json.loads(out) == ["1/2", "1/2"]
    code, out, _ = run(capsys, "slopes", str(f), "--generic")
    assert json.loads(out) == ["-1/2", "-1/2"]


def test_hn_check(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"p": 3, "a": 1, "rank": 3, "matrix": [["1", "0", "0"], ["0", "3", "0"], ["0", "0", "9"]]}))
    code, out, _ = run(capsys, "hn-check", str(f))
    assert code == 0 and json.loads(out) == {"filtrations": 13, "all_dominate": True}


def test_dlambda_check(capsys):
    code, out, _ = run(capsys, "dlambda", "--p", "5", "--d", "1", "--h", "2", "--samples", "5", "check")
    assert code == 0
    assert all(line.startswith("PASS ") for line in out.splitlines())


def test_tube_worked_example(capsys):
    code, out, _ = run(capsys, "tube", "--p", "7", "--closed", "T", "--point", "disk:0:1/2")
    res = json.loads(out)
    assert code == 0 and res["membership"] == "In" and res["witness"] == 2
    code, out, _ = run(capsys, "tube", "--p", "7", "--closed", "T", "--point", "rank2:0:0:minus")
    res = json.loads(out)
    assert (res["membership"], res["witness"], res["spmax_membership"]) == ("In", "NoWitness", "Out")


def test_legendre_csv_stdout(capsys):
    code, out, _ = run(capsys, "legendre", "--p", "7")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "point,label,slopes,rank2_boundary"
    ss = [l for l in lines if "GoodSupersingular" in l and l.startswith("disk:") and l.split(",")[0].endswith(":1")]
    assert len(ss) == 3
    assert any(l.startswith("disk:2:0,GoodOrdinary") for l in lines)


def test_legendre_files(capsys, tmp_path):
    svg, csv = tmp_path / "f.svg", tmp_path / "f.csv"
    code, out, _ = run(capsys, "legendre", "--p", "7", "--svg", str(svg), "--csv", str(csv))
    assert code == 0
    assert json.loads(out)["supersingular_disks"] == ["disk:2:1", "disk:4:1", "disk:6:1"]
    assert svg.read_text().startswith("<svg")
    assert csv.read_text().startswith("point,label")


def test_legendre_parallel_matches_serial(capsys):
    _, a, _ = run(capsys, "legendre", "--p", "5", "--grid", "dense")
    _, b, _ = run(capsys, "--jobs", "2", "legendre", "--p", "5", "--grid", "dense")
    assert a == b


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "FAIL" not in out


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["kottwitz", "--rank", "2"],
    ["legendre", "--p", "9"],
    ["slopes", "missing.json"],
    ["slopes", "missing.json", "--prec", "4"],
    ["--jobs", "0", "selftest"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_domain_errors_exit_1(capsys):
    code, _, err = run(capsys, "legendre", "--p", "7", "--grid", "classical:1")
    assert code == 1 and json.loads(err)["error"] == "ExcludedPoint"
    code, _, err = run(capsys, "kottwitz", "--rank", "3", "--mu", "0,1")
    assert code == 1 and json.loads(err)["error"] == "SizeMismatch"
    code, _, err = run(capsys, "legendre", "--p", "2")
    assert code == 1 and json.loads(err)["error"] == "EvenPrime"


def test_precision_from_environment(capsys, monkeypatch, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"p": 7, "a": 1, "rank": 1, "matrix": [["7"]]}))
    monkeypatch.setenv("SLOPELAB_PREC", "3")
    assert main(["slopes", str(f)]) == 2
    monkeypatch.setenv("SLOPELAB_PREC", "12")
    assert main(["slopes", str(f)]) == 0


def test_deterministic_across_processes():
    cmd = [sys.executable, "-m", "slopelab.cli", "--seed", "3", "dlambda", "--p", "3", "--d", "1", "--h", "2", "--samples", "5", "check"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
