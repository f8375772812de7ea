import csv
import io
import json
import math
from pathlib import Path

import pytest

from loopgas.catalog import bundled_algebra_path, bundled_path, catalog_names, emit_category, load_bundled
from loopgas.cli import main

from conftest import LOG2, with_entry

FIXTURE = Path(__file__).parent / "fixtures" / "conjecture_catalog.csv"
SAFE = {"log": math.log, "sqrt": math.sqrt}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    return code, json.loads(out), err


@pytest.fixture
def broken_file(tmp_path, fib):
    key = (1, 1, 1, 1, 1, 1)
    path = tmp_path / "bad.json"
    path.write_text(emit_category(with_entry(fib, "F", key, -fib.F[key])), encoding="utf-8")
    return path


def test_tee_toric_prints_log2(capsys):
    code, out, _ = run(capsys, "tee", str(bundled_path("toric3d")))
    assert code == 0
    assert "δ = 0.693147" in out


def test_tee_accepts_bundled_names(capsys):
    for arg in ("toric3d", "toric3d.json"):
        code, report, _ = run_json(capsys, "tee", arg)
        assert code == 0 and report["delta"] == pytest.approx(LOG2)


def test_tee_with_algebra(capsys):
    code, report, _ = run_json(capsys, "tee", "toric3d", "--algebra", str(bundled_algebra_path("toric3d-A1")))
    assert code == 0
    (b,) = report["boundary"]
    assert b["deltaBullet"] == pytest.approx(0, abs=1e-15) and b["deltaCirc"] == pytest.approx(LOG2)
    assert report["schema"] == 1


def test_tee_general_case_exits_4(capsys):
    code, out, err = run(capsys, "tee", "ty-klein", "--algebra", str(bundled_algebra_path("ty-klein-Ag1")))
    assert code == 4
    assert "general form unknown" in err
    code, _, _ = run(capsys, "tee", "fibonacci-x-toric3d", "--algebra", str(bundled_algebra_path("fibonacci-x-toric3d-Ax")))
    assert code == 4


def test_exit_codes(capsys, tmp_path, broken_file):
    assert run(capsys, "tee", str(broken_file))[0] == 3
    assert run(capsys, "validate", str(broken_file))[0] == 3
    assert run(capsys, "classify", str(broken_file))[0] == 3
    assert run(capsys, "tee", str(tmp_path / "missing.json"))[0] == 2
    (tmp_path / "junk.json").write_text("{not json", encoding="utf-8")
    assert run(capsys, "validate", str(tmp_path / "junk.json"))[0] == 2
    assert run(capsys)[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "--tol", "-1", "validate", "toric3d")[0] == 1
    assert run(capsys, "--jobs", "0", "conjecture", "--catalog")[0] == 1
    assert run(capsys, "catalog", "emit", "no-such")[0] == 1


def test_invalid_algebra_exits_3(capsys, tmp_path):
    alg = json.loads(bundled_algebra_path("toric3d-A1").read_text(encoding="utf-8"))
    alg["category"] = "antisemion"
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(alg), encoding="utf-8")
    # A = 1⊕x over Z2(-1, -i) violates associativity
    assert run(capsys, "tee", "antisemion", "--algebra", str(path))[0] == 3


def test_validate_reports_residuals(capsys, broken_file):
    code, report, _ = run_json(capsys, "validate", "fibonacci")
    assert code == 0 and report["ok"]
    code, report, _ = run_json(capsys, "validate", str(broken_file))
    assert code == 3 and not report["ok"]
    code, out, _ = run(capsys, "validate", str(broken_file))
    assert "pentagon" in out and "✗" in out


def test_classify_fields(capsys):
    code, report, _ = run_json(capsys, "classify", "ty-klein")
    assert code == 0
    assert report["classification"] == "ProperlyPremodular"
    assert (report["muegerRank"], report["tyLike"]) == (4, True)
    assert report["muegerDsq"] == pytest.approx(4)


def fixture_rows():
    with FIXTURE.open(encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_conjecture_matches_fixture(capsys):
    code, out, _ = run(capsys, "--format", "csv", "conjecture", "--catalog")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    expected = fixture_rows()
    assert [r["name"] for r in rows] == [r["name"] for r in expected] == sorted(catalog_names())
    yes = {"yes": "True", "no": "False"}
    for got, want in zip(rows, expected):
        assert got["schema"] == "1"
        assert got["catId"] == want["catId"]
        assert int(got["rank"]) == int(want["rank"])
        assert int(got["muegerRank"]) == int(want["muegerRank"])
        assert got["premodular"] == want["premodular"]
        for key in ("pointed", "tyLike", "conjectureOk"):
            assert got[key] == yes[want[key]], (got["name"], key)
        for key in ("Dsq", "TEE", "logDsqMueger"):
            assert float(got[key]) == pytest.approx(eval(want[key], {"__builtins__": {}}, SAFE), abs=1e-8)
        assert got["valid"] == "True"


def test_conjecture_table_shows_check_everywhere(capsys):
    code, out, _ = run(capsys, "conjecture", "--catalog")
    assert code == 0
    body = out.splitlines()[2:]
    assert len(body) == len(catalog_names())
    assert all(line.rstrip().split()[-2] == "✓" for line in body)


def test_conjecture_jobs_is_deterministic(capsys):
    serial = run(capsys, "--format", "csv", "conjecture", "--catalog")[1]
    parallel = run(capsys, "--format", "csv", "--jobs", "2", "conjecture", "--catalog")[1]
    assert serial == parallel


def test_conjecture_on_files(capsys, broken_file):
    code, rows, _ = run_json(capsys, "conjecture", str(bundled_path("semion")), "fibonacci")
    assert code == 0 and [r["name"] for r in rows["rows"]] == ["fibonacci", "semion"]
    code, _, _ = run(capsys, "conjecture", str(broken_file))
    assert code == 3


def test_log_base_two(capsys):
    code, report, _ = run_json(capsys, "--log-base", "2", "tee", "toric3d")
    assert report["delta"] == pytest.approx(1)
    assert report["gamma"] == pytest.approx(2)
    assert report["logBase"] == "2"
    code, report, _ = run_json(capsys, "tee", "toric3d", "--log-base", "2")
    assert report["delta"] == pytest.approx(1)


def test_catalog_list_and_emit(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()[2:]] == catalog_names()
    code, out, _ = run(capsys, "catalog", "emit", "semion")
    assert out == bundled_path("semion").read_text(encoding="utf-8")
    target = tmp_path / "semion.json"
    assert run(capsys, "catalog", "emit", "semion", "-o", str(target))[0] == 0
    assert target.read_text(encoding="utf-8") == emit_category(load_bundled("semion"))
