from __future__ import annotations

import json
import subprocess
import sys

import jsonschema
import pytest

from simplecch import cli, homotopy, morse_lab, orbifold


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def _restore_tolerances():
    saved = (homotopy.MATCH_TOL, orbifold.TOL, morse_lab.GRAD_TOL, morse_lab.EIG_TOL)
    yield
    cli.apply_tolerances(*saved)


def test_report_dihedral_markdown(capsys):
    code, out, _ = run(capsys, "report", "--group", "dihedral:3", "--levels", "2", "--format", "markdown")
    assert code == 0
    section = out.split("## Level N = 2")[1].split("## ")[0]
    rows = [line for line in section.splitlines() if line.startswith("| ") and line[2].isdigit()]
    assert [int(r.rsplit("|", 2)[1]) for r in rows] == [5, 1, 6, 1, 6, 1, 5]


def test_report_icosahedral_limit(capsys):
    code, out, _ = run(capsys, "report", "--group", "icosahedral", "--levels", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["direct_limit"] == {"0": 8, "even>=2": 9}
    assert rep["mckay"] == {"label": "E~8", "nodes": 9, "isomorphic": True, "rank_check": True}
    jsonschema.validate(rep, cli.load_schema("report"))


def test_report_cyclic_two(capsys):
    code, out, _ = run(capsys, "report", "--group", "cyclic:2", "--levels", "1")
    rep = json.loads(out)
    assert code == 0
    assert rep["levels"][0]["ranks"] == {"0": 1, "2": 1}
    assert rep["direct_limit"] == {"0": 1, "even>=2": 2}


@pytest.mark.parametrize("group", ["cyclic:7", "dihedral:4", "tetrahedral", "octahedral"])
def test_report_matches_schema(capsys, group):
    code, out, _ = run(capsys, "report", "--group", group, "--levels", "3")
    assert code == 0
    jsonschema.validate(json.loads(out), cli.load_schema("report"))


@pytest.mark.parametrize("group,suite", [
    ("octahedral", "prop42"),
    ("dihedral:5", "badbuilding"),
    ("icosahedral", "tables"),
    ("cyclic:6", "convexity"),
    ("dihedral:6", "mckay"),
])
def test_verify_passes(capsys, group, suite):
    code, out, _ = run(capsys, "verify", "--group", group, "--suite", suite)
    assert code == 0
    res = json.loads(out)
    assert res["passed"]
    jsonschema.validate(res, cli.load_schema("verify"))
    if suite == "badbuilding":
        assert {c["detail"] for c in res["suites"]["badbuilding"]} == {2}


def test_verify_all_tetrahedral(capsys):
    code, out, _ = run(capsys, "verify", "--group", "tetrahedral", "--suite", "all", "--samples", "200000",
                       "--format", "markdown")
    assert code == 0
    assert out.rstrip().endswith("PASS")
    assert "FAIL" not in out


@pytest.mark.parametrize("argv", [
    ["report", "--group", "cyclic:1"],
    ["report", "--group", "dihedral:x"],
    ["report", "--group", "hexagonal"],
    ["report", "--group", "cyclic:3", "--levels", "0"],
    ["report", "--group", "cyclic:3", "--format", "xml"],
    ["verify", "--group", "cyclic:3", "--suite", "everything"],
    ["verify"],
    [],
])
def test_bad_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_failure_exits_1(capsys):
    code, out, err = run(capsys, "verify", "--group", "dihedral:3", "--suite", "tables", "--match-tol", "1e-20")
    assert code == 1
    assert json.loads(out)["passed"] is False
    assert "FAIL tables" in err


def test_json_is_byte_identical():
    cmd = [sys.executable, "-m", "simplecch", "report", "--group", "octahedral", "--levels", "2"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b
    assert a.endswith(b"\n")


def test_module_entry_point_exit_code():
    cmd = [sys.executable, "-m", "simplecch", "verify", "--group", "cyclic:0"]
    assert subprocess.run(cmd, capture_output=True).returncode == 2
