from __future__ import annotations

import csv
import io
import json

import pytest

from equifocal.cli import main
from equifocal.symcat import data_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_table1(capsys):
    code, out, _ = run(capsys, "table1")
    rows = _rows(out)
    assert code == 0 and len(rows) > 30
    assert list(rows[0]) == ["label", "name", "n_pos", "n_mult1", "m", "expected_m", "match"]
    assert all(r["match"] == "true" for r in rows)


def test_table1_corrupted_and_empty(tmp_path, capsys):
    src = json.loads(data_path("symmetric_spaces.json").read_text())
    g = next(s for s in src["spaces"] if s["label"] == "G")
    g["multiplicities"] = {"long": 1, "short": 2}
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(src))
    code, out, _ = run(capsys, "table1", "--catalog", str(bad))
    assert code == 1
    assert [r["label"] for r in _rows(out) if r["match"] == "false"] == ["G"]
    empty = tmp_path / "empty.json"
    empty.write_text("")
    code, out, _ = run(capsys, "table1", "--catalog", str(empty))
    assert code == 0 and out.strip() == "label,name,n_pos,n_mult1,m,expected_m,match"
    code, _, err = run(capsys, "table1", "--catalog", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err


def test_hermann_rows(capsys, tmp_path):
    out_file = tmp_path / "h.csv"
    code, _, _ = run(capsys, "hermann", "--out", str(out_file))
    rows = {(r["h_label"], r["space"]): r for r in _rows(out_file.read_text())}
    assert rows[("SO'(16)", "EVIII")]["computed"] == "120"
    assert rows[("Sp(4,C)", "II-E6")]["computed"] == "72"
    # the exit code reports whether every printed value was reproduced
    assert code == (0 if all(r["match"] == "true" for r in rows.values()) else 1)


def test_arrange(capsys, tmp_path):
    svg = tmp_path / "a.svg"
    code, out, _ = run(capsys, "arrange", "SO(3) on AI[n=3]", "--xi", "1,2", "--svg", str(svg))
    assert code == 0 and out.count("integer_pi") == 3 * 7
    assert svg.read_text().count("<line") == 3
    code, out, _ = run(capsys, "arrange", "SO(3) on AI[n=3]", "--xi", "1,2", "--j-range", "0..0")
    assert code == 0 and len(out.strip().splitlines()) == 4
    code, _, err = run(capsys, "arrange", "nope", "--xi", "1,2")
    assert code == 2 and "no Hermann action" in err
    code, _, err = run(capsys, "arrange", "Sp(1,3) on EII", "--xi", "1,2,3,4")
    assert code == 2 and "insufficient split data" in err
    code, out, _ = run(capsys, "arrange", "--list")
    assert code == 0 and "SO(3) on AI[n=3]" in out.splitlines()


def test_spectra_and_focal_radii(capsys):
    code, out, _ = run(capsys, "spectra", "SO(3) on AI[n=3]", "--xi", "1,2", "--eta", "1/3,-1")
    rep = json.loads(out)
    assert code == 0 and rep["max_distinct_spec"] == 3 == rep["numeric_distinct"] and rep["proper"]
    code, out, _ = run(capsys, "focal-radii", "--lambda", "2", "--beta", "1", "--j-range", "0..0")
    assert code == 0 and json.loads(out)[0][0] == pytest.approx(0.5493061443340548)


def test_roots_and_weyl(capsys):
    code, out, _ = run(capsys, "roots-check", "BC", "2")
    assert code == 0 and json.loads(out)["reduced"] is False
    code, out, _ = run(capsys, "roots-check", "B", "2", "--subspace", "1,0")
    assert code == 0 and json.loads(out)["roots"] == 2
    code, out, _ = run(capsys, "weyl-order", "B", "3")
    assert code == 0 and json.loads(out)["order"] == 48
    code, _, _ = run(capsys, "weyl-order", "B", "3", "--max-order", "10")
    assert code == 2


def test_oracle(capsys):
    code, out, _ = run(capsys, "--trials", "10", "oracle", "so_p_q", "2", "3")
    rep = json.loads(out)
    assert code == 0 and rep["commuting_ok"] and rep["model"] == "so_p_q(2,3)"
    code2, out2, _ = run(capsys, "--trials", "10", "oracle", "so_p_q", "2", "3")
    assert out2 == out
    code, _, err = run(capsys, "oracle", "sl_n_R", "50")
    assert code == 2 and "model too large" in err


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "weyl-order", "Q", "2")[0] == 2
    assert run(capsys, "arrange", "SO(3) on AI[n=3]", "--xi", "1,x")[0] == 2
