import json
import subprocess
import sys
from pathlib import Path

import pytest

from mackeyro.cli import QueryError, RangeQuery, main, parse_box, read_fixtures, run, to_json
from mackeyro.group import C4, GroupSpec, LAMBDA, SIGMA, parse_virtual

FIXTURES = Path(__file__).parent.parent / "fixtures"


def records(argv, capsys):
    assert main(argv + ["--format", "json"]) == 0
    return json.loads(capsys.readouterr().out)["records"]


def test_sphere_zero_has_one_record(capsys):
    recs = records(["--sphere", "0"], capsys)
    assert [(r["grading"], r["degree"], r["name"]) for r in recs] == [("0", 0, "Z")]


def test_box_contains_the_z4_record(capsys):
    recs = records(["--box", "n<=2,m<=2"], capsys)
    assert any(r["grading"] == "2*sigma+lambda" and r["degree"] == 2 and r["name"] == "<Z/4>" for r in recs)


def test_sigma_minus_two_lambda(capsys):
    recs = records(["--sphere", "sigma-2*lambda"], capsys)
    assert {(r["degree"], r["name"]) for r in recs} >= {(-3, "L-")}


def test_records_are_ordered(capsys):
    recs = records(["--box", "n<=1,m<=1"], capsys)
    keys = [(parse_virtual(r["grading"])[SIGMA], parse_virtual(r["grading"])[LAMBDA], r["degree"]) for r in recs]
    assert keys == sorted(keys)


def test_json_round_trip_is_byte_stable(capsys):
    assert main(["--box", "n<=1,m<=2", "--tasks", "additive,names,products", "--format", "json"]) == 0
    text = capsys.readouterr().out
    assert to_json(json.loads(text)) == text


def test_deterministic_with_cache_and_jobs(tmp_path, monkeypatch, capsys):
    base = ["--box", "n<=2,m<=1", "--format", "json"]
    assert main(base) == 0
    plain = capsys.readouterr().out
    assert main(base + ["--cache", str(tmp_path / "c"), "--jobs", "2"]) == 0
    cold = capsys.readouterr().out
    monkeypatch.setenv("MACKEYRO_CACHE", str(tmp_path / "c"))
    assert main(base) == 0
    warm = capsys.readouterr().out
    assert plain == cold == warm
    assert len(list((tmp_path / "c").glob("*.json"))) == 15


def test_provenance_depends_on_the_query():
    a = run(RangeQuery(C4, bounds=parse_box("n<=1", C4)))
    b = run(RangeQuery(C4, bounds=parse_box("n<=1,m<=0", C4)))
    c = run(RangeQuery(C4, bounds=parse_box("n<=1", C4), tasks=("additive", "products")))
    assert a == b
    assert a["records"][0]["provenance"] != c["records"][0]["provenance"]


@pytest.mark.parametrize("argv", [
    ["--box", "n<=2,q<=1"],
    ["--box", "n=2"],
    ["--sphere", "sigma+"],
    ["--group", "4,1", "--sphere", "0"],
    ["--coefficients", "Q", "--sphere", "0"],
    ["--sphere", "0", "--tasks", "nope"],
    ["--tasks", "massey"],
    ["--group", "3,1", "--sphere", "0", "--tasks", "names"],
    [],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "mackeyro:" in capsys.readouterr().err


def test_box_errors_point_at_the_problem():
    with pytest.raises(QueryError) as err:
        parse_box("n<=2,q<=1", C4)
    assert err.value.pos == 5


def test_box_for_other_groups():
    g = GroupSpec(3, 2)
    assert [b for _, b in parse_box("n<=1,m<=2", g)] == [1, 2]
    assert main(["--group", "3,2", "--box", "n<=1,m<=1", "--format", "table"]) == 0


def test_table_feeds_back_as_fixtures(tmp_path, capsys):
    assert main(["--box", "n<=1,m<=1", "--tasks", "additive,names"]) == 0
    path = tmp_path / "f.txt"
    path.write_text(capsys.readouterr().out)
    assert main(["--fixtures", str(path)]) == 0


@pytest.mark.parametrize("name", ["c4_generators.txt", "c4_relations.txt"])
def test_shipped_fixtures_pass(name, capsys):
    assert main(["--fixtures", str(FIXTURES / name)]) == 0
    assert " 0 failed" in capsys.readouterr().out


def test_corrupted_fixture_reports_exactly_one_failure(tmp_path, capsys):
    lines = (FIXTURES / "c4_additive.txt").read_text().splitlines()[:120]
    i = next(i for i, l in enumerate(lines) if l.endswith("| <Z/2>"))
    lines[i] = lines[i][: -len("<Z/2>")] + "<Z/4>"
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join(lines) + "\n")
    assert main(["--fixtures", str(bad)]) == 1
    out = capsys.readouterr().out
    assert out.count("FAIL") == 1
    assert "expected <Z/4>, got <Z/2>" in out


def test_ill_formed_fixture(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("a | b | c | d | e | f\n")
    with pytest.raises(QueryError):
        read_fixtures(str(bad))
    assert main(["--fixtures", str(tmp_path / "missing.txt")]) == 2


def test_relations_and_massey_tasks(capsys):
    assert main(["--tasks", "massey", "--triple", "2/u_{2s};a_s;2/u_{2s}", "--triple", "a_s;a_s;a_s",
                 "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    first, second = out["massey"]
    assert first["defined"] and first["representative"]["coords"] == [1]
    assert not second["defined"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mackeyro", "--sphere", "lambda"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "lambda | 2 | Z | Z;Z;Z" in proc.stdout
