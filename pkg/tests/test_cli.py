import json

import pytest
from click.testing import CliRunner

from mapsolver.cli import main

C4 = "c ring\np map 4 4\ne 1 2 0\ne 2 3 1\ne 3 4 0\ne 1 4 1\n"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def c4(tmp_path):
    p = tmp_path / "c4.map"
    p.write_text(C4)
    return p


def test_solve_cycle(runner, c4):
    res = runner.invoke(main, ["solve", "--input", str(c4), "--json"])
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["schema_version"] == 1
    assert rep["weight"] == 2 and rep["ratio_to_d2"] == 1.0
    assert "bound_satisfied" not in rep and "opt" not in rep


def test_solve_with_oracle(runner, c4):
    rep = json.loads(runner.invoke(main, ["solve", "-i", str(c4), "--json", "--oracle"]).output)
    assert rep["opt"] == 2 and rep["bound_satisfied"] is True


def test_solve_text_report(runner, c4):
    res = runner.invoke(main, ["solve", "-i", str(c4)])
    assert "output weight 2" in res.output


def test_verify_round_trip_and_tampering(runner, c4, tmp_path):
    sol = tmp_path / "c4.sol"
    assert runner.invoke(main, ["solve", "-i", str(c4), "-o", str(sol)]).exit_code == 0
    res = runner.invoke(main, ["verify", "-i", str(c4), "-s", str(sol), "--exact"])
    assert res.exit_code == 0 and "feasible, weight 2" in res.output and "gap 0" in res.output
    lines = sol.read_text().splitlines()
    body = [ln for ln in lines if ln.startswith("e")][:-1]
    bad = tmp_path / "bad.sol"
    bad.write_text(f"p sol 4 {len(body)}\n" + "\n".join(body) + "\n")
    res = runner.invoke(main, ["verify", "-i", str(c4), "-s", str(bad)])
    assert res.exit_code == 3
    assert "is a bridge" in res.output


def test_exit_codes(runner, tmp_path):
    p = tmp_path / "x.map"
    p.write_text("p map 2 1\ne 1 2\n")
    assert runner.invoke(main, ["solve", "-i", str(p)]).exit_code == 2
    p.write_text("p map 2 1\ne 1 1 1\n")
    assert runner.invoke(main, ["solve", "-i", str(p)]).exit_code == 3
    p.write_text("p map 3 2\ne 1 2 1\ne 2 3 1\n")
    res = runner.invoke(main, ["solve", "-i", str(p)])
    assert res.exit_code == 3 and "bridge" in res.output


def test_gen_is_deterministic(runner):
    a = runner.invoke(main, ["gen", "-n", "8", "--density", "0.5", "--seed", "7"]).output
    b = runner.invoke(main, ["gen", "-n", "8", "--density", "0.5", "--seed", "7"]).output
    assert a == b and "p map 8" in a


def test_d2(runner, c4):
    rep = json.loads(runner.invoke(main, ["d2", "-i", str(c4), "--json"]).output)
    assert rep["weight"] == 2 and rep["size_classes"]["small"] == 1


def test_bench(runner):
    res = runner.invoke(main, ["bench", "--count", "12", "--oracle", "--json"])
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["summary"]["instances"] == 12
    assert out["summary"]["bound_satisfied"] == out["summary"]["bound_checked"] == 12
    names = [r["instance"] for r in out["reports"]]
    assert names == sorted(names)


def test_bench_parallel_matches_serial(runner):
    args = ["bench", "--count", "6", "--json"]
    a = json.loads(runner.invoke(main, args).output)
    b = json.loads(runner.invoke(main, args + ["-j", "2"]).output)
    strip = lambda o: [{k: v for k, v in r.items() if k != "wall_time"} for r in o["reports"]]
    assert strip(a) == strip(b)


def test_bench_on_files(runner, c4):
    res = runner.invoke(main, ["bench", "-i", str(c4.parent), "--json"])
    assert res.exit_code == 0
    assert json.loads(res.output)["summary"]["instances"] == 1
