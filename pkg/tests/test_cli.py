import json
import subprocess
import sys
from pathlib import Path

import pytest

from conglab.cli import main, parse_poly

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_text_golden(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", "--level", "113", "--prime", "2", "--cache-dir", str(tmp_path))
    assert code == 0
    assert out == (DATA / "analyze_113_2.txt").read_text()


def test_analyze_json_matches_text(capsys):
    code, out, _ = run(capsys, "analyze", "--level", "31", "--prime", "5", "--json")
    assert code == 0
    env = json.loads(out)
    assert env["schema_version"] == 1 and env["command"] == "analyze"
    assert env["timings"] is None and env["cache"] is None
    row = env["results"]
    _, text, _ = run(capsys, "analyze", "--level", "31", "--prime", "5")
    fields = dict(line.split(None, 1) if False else (line[:19].strip(), line[19:].strip()) for line in text.splitlines()[:8])
    assert fields["level"] == str(row["N"])
    assert fields["component rank"] == str(row["rank"])
    assert fields["order of T/J"] == str(row["order_T_mod_J"])
    assert fields["total depth"] == row["total_depth"]
    assert fields["verdict"] == row["verdict"]
    assert (row["rank"], row["order_T_mod_J"], row["total_depth"]) == (2, 1, "1")


def test_reports_identical_with_and_without_cache(capsys, tmp_path):
    args = ["analyze", "--level", "37", "--prime", "3", "--json", "--cache-dir", str(tmp_path)]
    _, cold, _ = run(capsys, *args)
    _, warm, _ = run(capsys, *args)
    _, off, _ = run(capsys, "analyze", "--level", "37", "--prime", "3", "--json", "--no-cache")
    assert cold == warm
    assert json.loads(cold)["results"] == json.loads(off)["results"]


def test_timings_flag(capsys, tmp_path):
    _, out, _ = run(capsys, "analyze", "--level", "11", "--prime", "5", "--json", "--timings", "--cache-dir", str(tmp_path))
    env = json.loads(out)
    assert "analyze" in env["timings"]
    assert env["cache"]["misses"] >= 1


def test_analyze_empty_component(capsys):
    code, out, _ = run(capsys, "analyze", "--level", "13", "--prime", "5")
    assert code == 0
    assert "no Eisenstein-congruent eigenforms" in out
    assert "total depth          0" in out


@pytest.mark.parametrize(
    "argv,code",
    [
        (["analyze", "--level", "15", "--prime", "5"], 2),
        (["analyze", "--level", "11", "--prime", "4"], 2),
        (["analyze", "--level", "113", "--prime", "2", "--precision", "2", "--max-precision", "2"], 3),
        (["import", "--table", "/nonexistent/table.json"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_sweep_small(capsys):
    code, out, _ = run(capsys, "sweep", "--max-level", "2")
    assert code == 0 and "no (N, p) pairs" in out
    code, out, _ = run(capsys, "sweep", "--max-level", "13", "--json")
    rows = json.loads(out)["results"]
    assert code == 0
    assert [(r["N"], r["p"], r["total_depth"], r["verdict"]) for r in rows] == [(11, 5, "1", "equality")]


def test_sweep_50_parallel(capsys):
    code, out, _ = run(capsys, "sweep", "--max-level", "50", "--jobs", "2", "--json")
    rows = json.loads(out)["results"]
    assert code == 0
    assert {r["N"] for r in rows} >= {11, 37}
    assert all(r["verdict"] == "equality" for r in rows)


def test_synthetic(capsys):
    code, out, _ = run(capsys, "synthetic", "--trials", "1", "--seed", "1", "--max-blocks", "1", "--json")
    res = json.loads(out)["results"]
    assert code == 0 and res["equality"] == 1 and res["failures"] == 0
    assert res["strict_fixture"]["verdict"] == "strict-inequality"
    code, out, _ = run(capsys, "synthetic", "--trials", "40", "--seed", "7", "--prime", "5", "--json")
    res = json.loads(out)["results"]
    assert code == 0 and res["passes"] == 40
    _, again, _ = run(capsys, "synthetic", "--trials", "40", "--seed", "7", "--prime", "5", "--json")
    assert again == out


def _write(tmp_path, doc):
    path = tmp_path / "table.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_import_two_system_table(capsys, tmp_path):
    doc = {
        "prime": "5",
        "precision": "20",
        "generators": ["g"],
        "systems": [{"label": "a", "values": ["0"]}, {"label": "b", "values": ["25"]}],
        "distinguished": "a",
    }
    code, out, _ = run(capsys, "import", "--table", _write(tmp_path, doc), "--json")
    res = json.loads(out)["results"]
    assert code == 0
    assert (res["order_T_mod_J"], res["normalized_total"], res["verdict"]) == (2, "2", "equality")


def test_import_duplicate_distinguished(capsys, tmp_path):
    doc = {
        "prime": "5",
        "precision": "20",
        "generators": ["g"],
        "systems": [{"label": "a", "values": ["3"]}, {"label": "b", "values": ["3"]}],
        "distinguished": "a",
    }
    code, _, err = run(capsys, "import", "--table", _write(tmp_path, doc))
    assert code == 2 and "InfiniteQuotient" in err


def test_import_schema_violation(capsys, tmp_path):
    code, _, err = run(capsys, "import", "--table", _write(tmp_path, {"prime": "5"}))
    assert code == 2 and "SchemaError" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "import", "--table", str(bad))[0] == 2


def test_import_small_residue_field_not_principal(capsys, tmp_path):
    """Four systems over F_2: #F^x = 1 < 3 - 1 and J is not principal."""
    doc = {
        "prime": "2",
        "precision": "20",
        "generators": ["g", "h"],
        "systems": [
            {"label": "a", "values": ["0", "0"]},
            {"label": "b", "values": ["2", "0"]},
            {"label": "c", "values": ["0", "2"]},
            {"label": "d", "values": ["2", "2"]},
        ],
        "distinguished": "a",
    }
    code, _, err = run(capsys, "import", "--table", _write(tmp_path, doc))
    assert code == 2 and "residue field" in err


def test_import_roundtrip_113(capsys, tmp_path):
    table = tmp_path / "t113.json"
    code, out, _ = run(capsys, "analyze", "--level", "113", "--prime", "2", "--export-table", str(table), "--json")
    row = json.loads(out)["results"]
    code, out, _ = run(capsys, "import", "--table", str(table), "--json")
    rep = json.loads(out)["results"]
    assert code == 0
    assert rep["normalized_order"] == str(row["order_T_mod_J"])
    assert rep["normalized_total"] == row["total_depth"]


def test_import_ext_modulus_override(capsys, tmp_path):
    doc = {
        "prime": "3",
        "precision": "20",
        "generators": ["g"],
        "systems": [{"label": "a", "values": [["0", "0"]]}, {"label": "b", "values": [["0", "1"]]}],
        "distinguished": "a",
    }
    code, out, _ = run(capsys, "import", "--table", _write(tmp_path, doc), "--ext-modulus", "x^2 - 3", "--json")
    rep = json.loads(out)["results"]
    assert code == 0 and rep["normalized_total"] == "1/2"


def test_parse_poly():
    assert parse_poly("x^2 + 2") == [2, 0, 1]
    assert parse_poly("2,0,1") == [2, 0, 1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "conglab", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "conglab" in proc.stdout
