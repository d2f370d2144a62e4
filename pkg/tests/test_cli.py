import json
import subprocess
import sys

import pytest

from endgraph.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_gen_dot(capsys, tmp_path):
    out = tmp_path / "b.dot"
    assert main(["gen", "--spec", "X(2,3;K1)", "--radius", "3", "--format", "dot", "--out", str(out)]) == 0
    assert out.read_text().count("label=") == 22


def test_gen_text(capsys):
    code, out = run(capsys, "gen", "--spec", "Y(3)", "--radius", "1", "--format", "text")
    assert code == 0 and out.splitlines()[0] == "4 4"


def test_gen_errors(capsys, monkeypatch):
    assert main(["gen", "--spec", "X(1,2;K1)", "--radius", "1"]) == 2
    assert main(["gen", "--spec", "nonsense", "--radius", "1"]) == 2
    monkeypatch.setenv("ENDGRAPH_MAX_VERTICES", "10")
    assert main(["gen", "--spec", "X(3,3;K1)", "--radius", "4"]) == 3


@pytest.mark.parametrize("argv,code,outcome", [
    (["--spec", "Z(2,2;Kbar2,K3)", "--property", "cs", "--k", "8"], 0, "Holds"),
    (["--spec", "Y(4)", "--property", "cs", "--k", "4"], 1, "Fails"),
    (["--spec", "X(3,2;K1)", "--property", "dist", "--k", "2"], 0, "Holds"),
    (["--spec", "X(3,2;K2)", "--property", "cs", "--k", "4"], 4, "Fails"),
    (["--spec", "X(3,2;K1)", "--property", "cshom", "--k", "3"], 0, "Holds"),
])
def test_check(capsys, argv, code, outcome):
    got, doc = report(capsys, "check", *argv)
    assert got == code
    assert doc["result"]["outcome"] == outcome
    assert set(doc) == {"command", "spec", "parameters", "result", "wall_time", "version"}
    if outcome == "Fails":
        assert doc["result"]["witness_verified"] is True


def test_check_witness_is_a_path_pair(capsys):
    _, doc = report(capsys, "check", "--spec", "Y(4)", "--property", "cs", "--k", "4")
    w = doc["result"]["witness"]
    assert w["shape"] == "PathPair" and len(w["addresses"]) == 2 and w["induced_edges"]


def test_check_rejects_small_radius(capsys):
    assert main(["check", "--spec", "Y(4)", "--property", "cs", "--k", "4", "--radius", "2"]) == 2


def test_enum_e(capsys):
    _, doc = report(capsys, "enum-e", "--k", "10", "--m", "2", "--n", "4", "--max-order", "5")
    assert [m["name"] for m in doc["result"]["members"]] == ["Kpart2x2", "C5"]
    _, doc = report(capsys, "enum-e", "--k", "15", "--m", "4", "--n", "6", "--max-order", "9")
    assert "LK33" in [m["name"] for m in doc["result"]["members"]]
    _, doc = report(capsys, "enum-e", "--k", "3", "--m", "1", "--n", "1", "--max-order", "4")
    assert doc["result"]["members"] == []
    assert main(["enum-e", "--k", "10", "--m", "2", "--n", "4", "--max-order", "10"]) == 3
    assert main(["enum-e", "--k", "2", "--m", "2", "--n", "4"]) == 2


def test_structure(capsys, tmp_path):
    dot = tmp_path / "t.dot"
    code, doc = report(capsys, "structure", "--spec", "X(3,2;K1)", "--radius", "4", "--dot", str(dot))
    assert code == 0 and doc["result"]["order"] == 1 and doc["result"]["tree"]
    assert "shape=box" in dot.read_text()
    code, doc = report(capsys, "structure", "--spec", "Z(2,2;K1,K2)", "--radius", "5")
    assert code == 0 and doc["result"]["order"] == 1 and any(doc["result"]["open_blocks"])
    assert main(["structure", "--spec", "X(2,2;K1)", "--radius", "0"]) == 5


def test_witness_command(capsys):
    _, doc = report(capsys, "witness", "--spec", "X(3,2;K2)", "--k", "4")
    assert doc["result"]["witness"]["shape"] == "Spoon" and doc["result"]["witness"]["verified"]
    _, doc = report(capsys, "witness", "--spec", "X(3,3;K1)", "--k", "4")
    assert doc["result"]["witness"] is None


def test_reports_are_deterministic(capsys):
    docs = []
    for _ in range(2):
        _, doc = report(capsys, "check", "--spec", "X(2,2;K3)", "--property", "cs", "--k", "4")
        doc.pop("wall_time")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]


def test_grid_subset(capsys):
    code, out = run(capsys, "--grid", "--only", "2,9")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "endgraph.cli", "gen", "--spec", "Y(3)", "--radius", "1",
                        "--format", "text"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("4 4")
    r = subprocess.run([sys.executable, "-m", "endgraph.cli"], capture_output=True, text=True)
    assert r.returncode == 2
