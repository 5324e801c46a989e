import csv
import io
import json

import pytest

from oistab.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def test_lie_homology_text():
    assert call("lie", "homology", "--ring", "builtin:Z", "--n", "3", "--i-max", "3") == (0, "1,2,2,1\n")


def test_group_homology_z2_like():
    code, out = call("group", "homology", "--family", "U", "--ring", "builtin:F2", "--n", "2",
                     "--i-max", "6", "--coeff", "f2")
    assert (code, out) == (0, "1,1,1,1,1,1,1\n")


def test_integral_torsion_strings():
    code, out = call("group", "homology", "--family", "U", "--ring", "builtin:F2", "--n", "2",
                     "--i-max", "3", "--coeff", "z", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["family", "ring", "n", "i", "coeff", "value"]
    assert [r[5] for r in rows[1:]] == ["Z", "Z/2", "0", "Z/2"]


def test_inversions_csv_feeds_stability(tmp_path):
    code, out = call("inversions", "--i-max", "3", "--n-max", "8", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(int(r["value"]) == int(r["n"]) - 1 for r in rows if r["i"] == "1")
    path = tmp_path / "inv.csv"
    path.write_text(out)
    code, out = call("stability", "fit", "--csv", str(path))
    fits = {tuple(f["key"])[-1]: f for f in json.loads(out)}
    assert [fits[i]["degree"] for i in range(4)] == [0, 1, 2, 3]


def test_jobs_and_cache_deterministic(tmp_path):
    args = ["lie", "homology", "--ring", "builtin:Z", "--n", "2-5", "--i-max", "2",
            "--format", "csv", "--cache-dir", str(tmp_path / "c")]
    a = call(*args)
    b = call(*args, "--jobs", "2")
    assert a == b and a[0] == 0
    assert len(list((tmp_path / "c").iterdir())) == 4


def test_exit_codes():
    assert call("frobnicate")[0] == 64
    assert call("inversions", "--i-max", "-1", "--n-max", "3")[0] == 64
    assert call("lie", "homology", "--ring", "builtin:Nope", "--n", "3", "--i-max", "1")[0] == 1
    assert call("group", "homology", "--family", "U", "--ring", "builtin:F2", "--n", "4",
                "--i-max", "3", "--coeff", "q", "--backend", "bar")[0] == 2


def test_ring_check():
    code, out = call("ring", "check", "--ring", "builtin:M2Z", "--cone", "[1, 0, 0, 1]")
    obj = json.loads(out)
    assert code == 0 and obj["ok"] and obj["in_positive_cone"]


def test_ring_check_failure(tmp_path):
    add = [[(a + b) % 4 for b in range(4)] for a in range(4)]
    mul = [[(a * b) % 4 for b in range(4)] for a in range(4)]
    mul[2][3] = 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "finite_tables", "n": 4, "add": add, "mul": mul,
                                "zero": 0, "one": 1}))
    assert call("ring", "check", "--ring", str(path))[0] == 1


def test_oi_and_ovi_commands():
    assert json.loads(call("oi", "count", "--n", "2", "--m", "4")[1])["count"] == 6
    assert json.loads(call("oi", "split", "--n", "4", "--marks", "2")[1])["sizes"] == [1, 2]
    assert json.loads(call("oi", "split", "--sizes", "1,2")[1])["marks"] == [2]
    code, out = call("ovi", "homcount", "--ring", "builtin:F3", "--d", "2", "--n", "4",
                     "--enumerate")
    obj = json.loads(out)
    assert code == 0 and obj["formula"] == obj["enumerated"] == sum(obj["per_alpha"].values())
    obj = json.loads(call("ovi", "factor", "--ring", "builtin:F2", "--matrix", "1;1")[1])
    assert obj["psi"] == [[1, 1], [0, 1]] and obj["f"] == [[0], [1]]


def test_group_build(tmp_path):
    path = tmp_path / "g.json"
    code, out = call("group", "build", "--family", "B", "--ring", "builtin:F3", "--n", "2",
                     "--output", str(path))
    assert code == 0 and json.loads(out)["order"] == 12
    assert len(json.loads(path.read_text())["elements"]) == 12


def test_lie_oi_module(tmp_path):
    code, out = call("lie", "oi-module", "--ring", "builtin:Z", "--i", "1", "--n-max", "5",
                     "--fg-degree", "2", "--output", str(tmp_path / "m"))
    obj = json.loads(out)
    assert code == 0 and obj["dims"] == [0, 0, 1, 2, 3, 4]
    assert (tmp_path / "m" / "manifest.json").exists()
    assert call("lie", "oi-module", "--ring", "builtin:Z", "--i", "1", "--n-max", "4",
                "--fg-degree", "1")[0] == 1


def test_degree_report():
    code, out = call("stability", "degree-report", "--i-max", "4", "--n-max", "14")
    obj = json.loads(out)
    assert code == 0 and [obj["report"][str(i)]["degree"] for i in range(5)] == [0, 1, 2, 3, 4]


def test_wpo_commands():
    a = json.dumps({"n": 2, "alpha": [2], "matrix": [[[1]], [[1]]]})
    b = json.dumps({"n": 3, "alpha": [3], "matrix": [[[0]], [[2]], [[1]]]})
    code, out = call("wpo", "leq", "--ring", "builtin:Z", "--a", a, "--b", b)
    obj = json.loads(out)
    assert code == 0 and obj["leq_monomial"] is True and obj["leq_word"] is True
    code, out = call("wpo", "embed-check", "--ring", "builtin:Z", "--n-max", "3", "--d-max", "1")
    assert code == 0 and json.loads(out)["ok"]
    code, out = call("wpo", "fin-demo", "--ring", "builtin:Z", "--ring", "builtin:Zi",
                     "--cases", "200", "--seed", "3")
    assert code == 0 and json.loads(out)["failures"] == 0


def test_version(capsys):
    assert run(["--version"]) == 0
    assert "oistab" in capsys.readouterr().out
