import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from treericci.cli import InputError, main, parse_ks

DATA = Path(__file__).resolve().parent.parent / "data"
FORK = str(DATA / "fork_chain.tree")
ORBITS = str(DATA / "fork_chain_orbits.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_ks():
    assert parse_ks("0..3,10,1e3") == [0, 1, 2, 3, 10, 1000]
    assert parse_ks("5,5, 2") == [2, 5]
    for bad in ("", "3..1", "x", "1.5", "-1"):
        with pytest.raises(InputError):
            parse_ks(bad)


def test_eig_text_and_json(capsys):
    code, out, _ = run(capsys, "eig", "--tree", FORK)
    assert code == 0 and out.startswith("lambda_max     -0.173")
    code, out, _ = run(capsys, "eig", "--tree", FORK, "--format", "json")
    data = json.loads(out)
    assert round(data["lambda_max"], 4) == -0.1731
    assert data["kappa"] == -data["lambda_max"]
    assert set(data["perron"]) == {"u1~v", "u1~w1", "u2~v", "u2~z1", "u2~z2"}


def test_eig_csv(capsys):
    code, out, _ = run(capsys, "eig", "--tree", FORK, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["edge", "perron"] and len(rows) == 6


def test_grow_table(capsys):
    code, out, _ = run(capsys, "grow", "--tree", FORK, "--pivot", "v", "--ks", "0,1,2,3,5,10,20,50,100",
                       "--orbits", ORBITS, "--oracle")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    got = [round(float(r["lambda"]), 4) for r in rows]
    assert got == [-0.1731, -0.0312, 0.0310, 0.0628, 0.0906, 0.1028, 0.0922, 0.0643, 0.0436]
    assert all(float(r["diff"]) < 1e-10 for r in rows)


def test_grow_oracle_large_k(capsys):
    code, out, _ = run(capsys, "grow", "--tree", FORK, "--pivot", "v", "--ks", "150,200", "--oracle")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["k"] for r in rows] == ["150", "200"]
    assert all(float(r["diff"]) < 1e-9 for r in rows)


def test_star_file(tmp_path, capsys):
    p = tmp_path / "s5.tree"
    p.write_text("c a\nc b\nc d\nc e\n")
    code, out, _ = run(capsys, "eig", "--tree", str(p), "--format", "json")
    assert json.loads(out)["lambda_max"] == -0.5
    code, out, _ = run(capsys, "alpha", "--tree", str(DATA / "single_edge.tree"), "--pivot", "v")
    data = json.loads(out)
    assert data["alpha"] == -2.0 and data["direction"] == "increasing_from_below"


def test_grow_json_with_diagnostics(capsys):
    code, out, _ = run(capsys, "grow", "--tree", FORK, "--pivot", "v", "--ks", "1..3",
                       "--diag-ks", "1e3,1e4,1e5", "--format", "json")
    data = json.loads(out)
    assert [r["k"] for r in data["rows"]] == [1, 2, 3]
    assert abs(data["diagnostics"]["alpha_hat"] - 8) < 0.08


def test_grow_csv_diagnostics_block(capsys):
    code, out, _ = run(capsys, "grow", "--tree", FORK, "--pivot", "v", "--ks", "1",
                       "--diag-ks", "1e3,1e4,1e5")
    table, diag = out.split("\n\n")
    assert diag.splitlines()[0] == "alpha_hat,alpha,error"


def test_alpha_json(capsys):
    code, out, _ = run(capsys, "alpha", "--tree", FORK, "--pivot", "v", "--orbits", ORBITS)
    data = json.loads(out)
    assert data["alpha"] == 8.0 and data["simple"] is True
    assert data["direction"] == "decreasing_from_above"
    assert data["r"] == [3.0, 1.0, 9.0, 3.0, 1.0]
    assert data["coordinates"][-1] == ["y"]


def test_alpha_degenerate(capsys):
    code, out, _ = run(capsys, "alpha", "--tree", str(DATA / "twin_hubs.tree"), "--pivot", "v")
    data = json.loads(out)
    assert data["simple"] is False and data["multiplicity"] == 2
    assert abs(data["alpha_max"] - 30.6525) < 1e-3


def test_limit(capsys):
    code, out, _ = run(capsys, "limit", "--tree", FORK, "--pivot", "v", "--format", "json")
    data = json.loads(out)
    assert data["lambda_inf"] == 0 and data["achievers"] == ["scalar"]
    assert len(data["branches"]) == 2
    assert data["branches"][0]["A"] == [[-0.5, 0.5], [0.5, -1.5]]


def test_criterion(capsys):
    code, out, _ = run(capsys, "criterion", "--tree", str(DATA / "single_edge.tree"),
                       "--pivot", "v", "--format", "json")
    data = json.loads(out)
    assert data["theta"] == "inf" and data["guaranteed"] is True
    assert data["applicable"] is False and data["y_star"] is None
    code, out, _ = run(capsys, "criterion", "--tree", FORK, "--pivot", "v")
    assert "criterion_holds True" in out


def test_split(capsys):
    code, out, _ = run(capsys, "split", "--tree", FORK)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][-1] == "potential" and len(rows) == 6
    for row in rows[1:]:
        assert abs(sum(float(x) for x in row[1:-1])) < 1e-10  # 12-digit output


@pytest.mark.parametrize("argv, code", [
    (["eig", "--tree", "/nonexistent.tree"], 2),
    (["grow", "--tree", FORK, "--pivot", "nobody"], 2),
    (["grow", "--tree", FORK, "--pivot", "v", "--ks", "3..1"], 2),
    (["alpha", "--tree", FORK, "--pivot", "v", "--orbits", str(DATA / "fork_chain.tree")], 2),
    (["grow", "--tree", FORK, "--pivot", "v", "--ks", "1", "--diag-ks", "1,2"], 4),
    (["grow", "--tree", FORK, "--pivot", "v", "--ks", "3000", "--oracle"], 0),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_bad_tree_file(tmp_path, capsys):
    p = tmp_path / "cycle.tree"
    p.write_text("a b\nb c\nc a\n")
    code, _, err = run(capsys, "eig", "--tree", str(p))
    assert code == 2 and err.startswith("error:")


def test_incompatible_orbits_exit(tmp_path, capsys):
    p = tmp_path / "o.json"
    p.write_text(json.dumps([["u1~w1", "u2~z1"]]))
    assert run(capsys, "limit", "--tree", FORK, "--pivot", "v", "--orbits", str(p))[0] == 4


def test_defective_tie_exit(tmp_path, capsys):
    p = tmp_path / "hub3.tree"
    p.write_text("v a0\na0 l0\na0 l1\na0 l2\n")
    assert run(capsys, "alpha", "--tree", str(p), "--pivot", "v")[0] == 3


def test_deterministic_output():
    cmd = [sys.executable, "-m", "treericci", "grow", "--tree", FORK, "--pivot", "v",
           "--ks", "0..12", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
