import csv
import io
import json
import subprocess
import sys

import pytest

from hermharm.cli import REPORTS, RunConfig, main, run
from hermharm.harmonic import DimensionTable, box_table, hodge_table
from hermharm.model import build_structure, load_spec


def run_main(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_text_tables_for_kodaira_thurston(capsys):
    status, out, _ = run_main(capsys, "run", "kodaira_thurston", "--reports", "tables", "--format", "text")
    assert status == 0
    assert "q=2 |  1  1  0\nq=1 |  1  2  1\nq=0 |  0  1  1" in out
    assert "q=2 |  1  1  1\nq=1 |  2  2  2\nq=0 |  1  1  1" in out
    assert "invariant Betti numbers: 1 3 4 3 1" in out


def test_json_round_trip(capsys):
    status, out, _ = run_main(capsys, "iwasawa", "--reports", "tables", "--format", "json")
    assert status == 0
    doc = json.loads(out)
    h = build_structure(load_spec("iwasawa"))
    assert DimensionTable.from_grid(doc["box_table"]) == box_table(h)
    assert DimensionTable.from_grid(doc["hodge_table"]) == hodge_table(h)
    assert tuple(map(tuple, doc["sections"]["tables"]["tables"]["box"]["by_pq"])) == box_table(h).entries
    assert doc["betti"] == [1, 4, 8, 10, 8, 4, 1]
    assert doc["box_table"] == [[1, 2, 0, 0], [2, 3, 3, 0], [0, 3, 3, 2], [0, 0, 2, 1]]


def test_json_scalars_are_strings(capsys):
    _, out, _ = run_main(capsys, "torus_n2", "--reports", "holomorphic", "--format", "json")
    forms = json.loads(out)["sections"]["holomorphic"]["forms"]
    assert forms[1]["basis"] == [["1", "0"], ["0", "1"]]


def test_csv_sections(capsys):
    status, out, _ = run_main(capsys, "kodaira_thurston", "--reports", "tables,dualities", "--format", "csv")
    assert status == 0
    rows = list(csv.reader(io.StringIO(out)))
    heads = [r[0] for r in rows if r and r[0].startswith("#")]
    assert "# tables:box" in heads and "# dualities:checks" in heads
    i = next(k for k, r in enumerate(rows) if r == ["# tables:box"])
    assert rows[i + 1 : i + 4] == [["1", "1", "0"], ["1", "2", "1"], ["0", "1", "1"]]


def test_all_reports_on_torus(capsys):
    status, out, _ = run_main(capsys, "torus_n2")
    assert status == 0
    for name in REPORTS:
        assert f"== {name}" in out
    assert out.rstrip().endswith("overall: PASS")


def test_report_order_is_fixed(capsys):
    _, out, _ = run_main(capsys, "torus_n2", "--reports", "lambda,tables", "--format", "json")
    assert list(json.loads(out)["sections"]) == ["tables", "lambda"]


def test_deterministic_output(capsys):
    first = run_main(capsys, "iwasawa", "--format", "json", "--seed", "3")
    second = run_main(capsys, "iwasawa", "--format", "json", "--seed", "3")
    assert first == second


def test_out_file(tmp_path, capsys):
    target = tmp_path / "doc.json"
    status, out, _ = run_main(capsys, "kodaira_thurston", "--reports", "tables", "--format", "json", "--out", str(target))
    assert status == 0 and out == ""
    assert json.loads(target.read_text())["name"] == "kodaira_thurston"


def test_structure_file_input(tmp_path, capsys):
    path = tmp_path / "heis.struct"
    path.write_text("name = heis\nn = 2\nd phi2 = phi1^phibar1\n")
    status, out, _ = run_main(capsys, str(path), "--reports", "tables")
    assert status == 0 and "structure heis" in out


def test_missing_file_is_input_error(capsys):
    status, out, err = run_main(capsys, "/nonexistent.struct")
    assert status == 1 and "no such structure file" in err and out == ""


def test_malformed_file_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.struct"
    path.write_text("n = 2\nd phi2 = 0.5 * phi1^phibar1\n")
    status, _, err = run_main(capsys, str(path))
    assert status == 1
    assert "line 2, column 11" in err


def test_unknown_report(capsys):
    status, _, err = run_main(capsys, "torus_n2", "--reports", "tables,plots")
    assert status == 1 and "plots" in err


def test_injected_identity_failure(capsys, inject_identity_failure):
    status, out, _ = run_main(capsys, "kodaira_thurston", "--reports", "identities")
    assert status == 2
    assert "[FAIL]" in out


def test_injected_convention_failure(capsys, inject_convention_failure):
    status, out, err = run_main(capsys, "kodaira_thurston")
    assert status == 3
    assert "convention failure" in err and out == ""


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("x", reports=())
    with pytest.raises(ValueError):
        RunConfig("x", format="xml")


def test_run_returns_document():
    status, text = run(RunConfig("torus_n3", reports=("tables",), format="json"))
    assert status == 0 and json.loads(text)["n"] == 3


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "hermharm", "kodaira_thurston", "--reports", "tables", "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["box_table"] == [[1, 1, 0], [1, 2, 1], [0, 1, 1]]
