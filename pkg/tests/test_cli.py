from __future__ import annotations

import csv
import json

import pytest

from qovoid.cli import main


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_construct_q13(capsys):
    rc, out, _ = run(["construct", "--p", "13", "--k", "1"], capsys)
    assert rc == 0
    d = json.loads(out)
    assert d["q"] == 13
    assert len(d["points"]) == 1020
    assert (d["params"]["a"], d["params"]["b"]) == (9, 11)
    assert d["component_sizes"] == [12, 84, 168, 672, 84]


def test_composite_p_hint(capsys):
    rc, _, err = run(["verify", "--p", "9"], capsys)
    assert rc == 2
    assert "p must be prime (did you mean --p 3 --k 2?)" in err


@pytest.mark.parametrize("argv", [["construct", "--p", "7"], ["verify", "--p", "3", "--k", "3"],
                                  ["construct", "--p", "5"], ["breakdown", "--p", "2"],
                                  ["construct", "--p", "13", "--workers", "0"]])
def test_config_errors(argv, capsys):
    rc, _, err = run(argv, capsys)
    assert rc == 2 and err.startswith("error:")


def test_roundtrip_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["construct", "--p", "3", "--k", "2", "--out", str(a)]) == 0
    assert main(["construct", "--p", "3", "--k", "2", "--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    rc, out, _ = run(["verify", "--p", "3", "--k", "2", "--in", str(a)], capsys)
    assert rc == 0
    assert json.loads(out)["histogram"] == {"4": 820}


def test_verify_detects_bad_input(tmp_path, capsys):
    a = tmp_path / "a.json"
    main(["construct", "--p", "3", "--k", "2", "--out", str(a)])
    d = json.loads(a.read_text())
    d["points"] = d["points"][1:]
    a.write_text(json.dumps(d))
    rc, out, _ = run(["verify", "--p", "3", "--k", "2", "--in", str(a)], capsys)
    assert rc == 1
    assert json.loads(out)["pass"] is False
    rc, _, err = run(["verify", "--p", "13", "--in", str(a)], capsys)
    assert rc == 2


def test_missing_input_file(tmp_path, capsys):
    rc, _, err = run(["verify", "--p", "13", "--in", str(tmp_path / "nope.json")], capsys)
    assert rc == 2 and "cannot read" in err


def test_csv_export(capsys):
    rc, out, _ = run(["construct", "--p", "3", "--k", "2", "--format", "csv"], capsys)
    rows = list(csv.reader(out.splitlines()))
    assert rc == 0 and rows[0] == ["x", "y", "c0", "c1", "z"] and len(rows) == 1 + 328


def test_orbits_and_counts(capsys):
    rc, out, _ = run(["orbits", "--p", "13"], capsys)
    recs = json.loads(out)
    assert rc == 0 and len(recs) == 3 + 12 + 8
    assert all(r["size_check"] for r in recs)
    rc, out, _ = run(["counts", "--p", "13"], capsys)
    assert json.loads(out) == {"n1": 2, "n2": 3, "n3": 3, "n4": 3, "short_orbits": 12, "long_orbits": 8}


def test_breakdown_csv(capsys):
    rc, out, _ = run(["breakdown", "--p", "13", "--case", "2"], capsys)
    rows = list(csv.DictReader(out.splitlines()))
    assert rc == 0 and rows
    assert all(r["case"] == "2" and r["c4"] == "6" and r["total"] == "6" for r in rows)


def test_selftest(capsys):
    rc, out, _ = run(["selftest", "--p", "3", "--k", "2"], capsys)
    assert rc == 0
    assert out.count("PASS") == 10 and "FAIL" not in out
