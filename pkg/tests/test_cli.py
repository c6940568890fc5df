import json
import subprocess
import sys
from pathlib import Path

import pytest

from padic_henon.cli import main, run
from padic_henon.reports import Report

GOLDEN = Path(__file__).parent / "golden" / "pk_table.csv"


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv,code,kind", [
    (["classify", "--a", "1/x", "--b", "1"], 2, "ParseError"),
    (["classify", "--p", "9", "--a", "1", "--b", "1"], 2, "ParseError"),
    (["cycles", "--a", "1/9", "--b", "1"], 3, "WrongRegion"),
    (["horseshoe", "point", "--a", "1/3", "--b", "1"], 4, "NotSquare"),
    (["cycles", "--a", "2", "--b", "3", "--kmax", "3", "--method", "table", "--state-budget", "100"], 6,
     "BudgetExceeded"),
    (["classify", "--a", "1/0", "--b", "1"], 8, "DivisionByZero"),
    (["fixed", "--a", "1"], 13, "InvalidArgument"),
])
def test_exit_codes(capsys, argv, code, kind):
    got, out, err = call(capsys, *argv)
    assert got == code
    assert json.loads(out)["error"]["kind"] == kind
    assert err.startswith(kind)


def test_parse_error_reports_position(capsys):
    _, out, _ = call(capsys, "classify", "--a", "1+5*3", "--b", "1")
    assert json.loads(out)["error"]["position"] == 2


def test_flags_before_and_after_command(capsys):
    _, before, _ = call(capsys, "--a", "2", "--b", "3", "classify")
    _, after, _ = call(capsys, "classify", "--a", "2", "--b", "3")
    a, b = json.loads(before), json.loads(after)
    a.pop("duration_s"), b.pop("duration_s")
    assert a == b and a["result"]["region"] == "IIplus"


def test_deterministic_payload():
    argv = ["attract", "--a", "1", "--b", "3", "--samples", "10", "--seed", "4"]
    r1, _, _ = run(argv)
    r2, _, _ = run(argv)
    assert r1.payload() == r2.payload()
    r3, _, _ = run(argv[:-1] + ["5"])
    assert r3.payload() != r1.payload()


def test_json_roundtrip():
    report, code, _ = run(["fixed", "--a", "8", "--b", "3"])
    assert code == 0
    back = Report.from_json(report.to_json())
    assert back.payload() == report.payload()
    assert len(back.result["fixed_points"]) == 2


def test_golden_table(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["table", "--published", "--format", "csv", "--out", str(out)]) == 0
    assert out.read_bytes() == GOLDEN.read_bytes()


def test_table_budget_rows(capsys):
    code, out, _ = call(capsys, "table", "--rows", "3,2,3,4", "--state-budget", "10", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "prime,a,b,k,P_k,periodic_balls,cycles"
    assert lines[1] == "3,2,3,1,1,1,1x1"
    assert lines[3:] == ["3,2,3,3,budget,,", "3,2,3,4,budget,,"]


def test_cycles_and_tree(capsys):
    code, out, _ = call(capsys, "cycles", "--a", "2", "--b", "3", "--kmax", "3", "--tree")
    d = json.loads(out)["result"]
    assert code == 0 and d["P_k"] == [1, 3, 9]
    assert d["attractor"]["verdict"] == "InfiniteCandidate"
    assert d["tree"]["levels"][0]["children"] == {"3": 1}


def test_orbit_and_fate(capsys):
    _, out, _ = call(capsys, "orbit", "--a", "1/9", "--b", "1", "--start", "9,9", "--n", "5")
    d = json.loads(out)["result"]
    assert d["steps"] == 1 and d["certificate"]["fate"] == "EscapesForward"
    _, out, _ = call(capsys, "fate", "--a", "1/3", "--b", "1", "--start", "1,2")
    assert json.loads(out)["result"]["fate"].startswith("Escapes")


def test_horseshoe_commands(capsys):
    base = ["--a", "1/9", "--b", "1", "--precision", "12"]
    _, out, _ = call(capsys, "horseshoe", "periodic", "--l", "3", *base)
    assert json.loads(out)["result"]["count"] == 8
    _, out, _ = call(capsys, "horseshoe", "verify", "--word", "+-.-++", *base)
    assert json.loads(out)["result"]["check"]["ok"]
    code, out, _ = call(capsys, "horseshoe", "code", "--start", "0,0", *base)
    assert code == 11


def test_text_format(capsys):
    _, out, _ = call(capsys, "goodred", "--a", "1", "--b", "1", "--kmax", "2", "--format", "text")
    assert "bijective[1]: True" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "padic_henon", "classify", "--a", "1/9", "--b", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["region"] == "III"
