import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from preordgrp.cli import ParseError, parse_model, print_model, run_command
from preordgrp.cli.model import catalog_model
from preordgrp.cli.report import REPORT_SCHEMA, Record, exit_code, text_line
from preordgrp.verdict import Fails, Holds, Unknown, Verdict

GOLDEN = Path(__file__).parent / "golden"
CASES = sorted(p.stem for p in GOLDEN.glob("*.pog"))


def run(argv, capsys):
    code = run_command(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_golden_suite_size():
    assert len(CASES) == 20


@pytest.mark.parametrize("case", CASES)
def test_golden(case, capsys, monkeypatch):
    monkeypatch.chdir(GOLDEN)
    code, out, err = run(["check", f"{case}.pog", "--format", "json"], capsys)
    expected_err = GOLDEN / f"{case}.err"
    if expected_err.exists():
        assert code == 3
        assert out == ""
        assert err == expected_err.read_text()
        return
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report == json.loads((GOLDEN / f"{case}.json").read_text())
    # the exit code is determined by the verdicts in the report
    assert code == report["exit_code"] == exit_code([r["verdict"] for r in report["records"]])


def test_heisenberg_report_witness(capsys):
    code, out, _ = run(["check", str(GOLDEN / "03_heisenberg_star.pog")], capsys)
    assert code == 1
    assert out.strip() == "star q: FAILS (witness: (identity, z, identity); a - b + c leaves the cone)"


def test_exit_code_precedence():
    table = [
        ([], 0),
        (["holds"], 0),
        (["holds", "unknown"], 2),
        (["unknown", "fails"], 1),
        (["holds", "fails", "unknown"], 1),
        (["fails", "error"], 3),
        (["error", "holds"], 3),
    ]
    for statuses, code in table:
        assert exit_code(statuses) == code, statuses


def test_text_lines():
    assert text_line(Record("shs", "p", Holds(("shs", "lattice-criterion")), 0)) == "shs p: HOLDS (certificate: (shs, lattice-criterion))"
    assert text_line(Record("shs", "s", Fails(("(1,0)", "(0,1)"), "r"), 0)) == "shs s: FAILS (witness: ((1,0), (0,1)); r)"
    line = text_line(Record("star", "w", Unknown(2, "no triple"), 0))
    assert line == "star w: UNKNOWN (bound 2: no triple)"
    assert text_line(Record("star", "i", Verdict("error", reason="bad"), 0)) == "star i: ERROR (bad)"


def test_catalog_dump_is_a_fixed_point(capsys):
    code, dump, _ = run(["catalog", "--dump"], capsys)
    assert code == 0
    m = parse_model(dump)
    again = print_model(m)
    assert again == dump
    assert print_model(parse_model(again)) == again
    assert print_model(catalog_model()) == dump


def test_validate_catalog_dump(tmp_path, capsys):
    code, dump, _ = run(["catalog", "--dump"], capsys)
    f = tmp_path / "catalog.pog"
    f.write_text(dump)
    code, out, _ = run(["validate", str(f)], capsys)
    assert code == 0
    assert out.startswith("ok:")


@pytest.mark.parametrize("case", [c for c in CASES if not (GOLDEN / f"{c}.err").exists()])
def test_golden_files_round_trip(case):
    text = (GOLDEN / f"{case}.pog").read_text()
    m = parse_model(text)
    printed = print_model(m)
    assert print_model(parse_model(printed)) == printed
    assert [c.text() for c in parse_model(printed).checks] == [c.text() for c in m.checks]


def test_empty_file_is_empty_model():
    assert parse_model("").is_empty()
    assert parse_model("# only a comment\n\n").is_empty()


def test_undefined_cone_names_identifier():
    with pytest.raises(ParseError) as e:
        parse_model("group Z = block {rank 1}\npog X = (Z, missing)\n")
    assert "missing" in str(e.value)
    assert (e.value.line, e.value.col) == (2, 13)


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("group Z = block {rank 1}\ncone N on Z = {pointed [[1]; functional [1]}\n", 2, 44),
        ("group Z = block {rank 1\n", 1, 17),
        ("group Z = blob {rank 1}\n", 1, 11),
        ("check star\n", 1, 11),
        ("morphism f = catalog nope\n", 1, 22),
    ],
)
def test_parse_errors_carry_location(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_model(text)
    assert (e.value.line, e.value.col) == (line, col)


def test_admissible_needs_base():
    with pytest.raises(ParseError):
        parse_model("morphism s = catalog sumZ\ncheck admissible s\n")


def test_unknown_flag_is_usage_error(capsys):
    code, _, _ = run(["check"], capsys)
    assert code == 3
    code, _, _ = run(["frobnicate"], capsys)
    assert code == 3


def test_missing_file(capsys):
    code, _, err = run(["check", "/nonexistent/model.pog"], capsys)
    assert code == 3 and err.startswith("error:")


def test_stdin_input(capsys, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("morphism s = catalog sum\ncheck shs s\n"))
    code, out, _ = run(["check", "-"], capsys)
    assert code == 1 and out.startswith("shs s: FAILS")


def test_explain(capsys):
    code, out, _ = run(["explain", "NinZ"], capsys)
    assert code == 0 and "F" in out
    code, out, _ = run(["explain", "sum"], capsys)
    assert code == 0 and "kernel pair" in out.lower()
    code, _, _ = run(["explain", "nope"], capsys)
    assert code == 3


CENSUS_ARGS = ["census", "--max-order", "4", "--block-limit", "1", "--bound", "2", "--format", "json", "--records"]


def test_census_json_small(capsys):
    code, out, _ = run(CENSUS_ARGS, capsys)
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    c = report["census"]
    assert c["central_vs_normal_g"] == 0 and c["gammac_vs_normal_gc"] == 0
    assert c["gammac_not_central_count"] >= 1
    assert code == report["exit_code"] == exit_code([r["verdict"] for r in report["records"]])


def test_parallel_matches_serial(capsys):
    _, serial, _ = run(CENSUS_ARGS, capsys)
    _, par, _ = run(CENSUS_ARGS + ["--parallel", "2"], capsys)
    assert json.loads(serial) == json.loads(par)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "preordgrp", "check", str(GOLDEN / "02_projection.pog")], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.count("HOLDS") == 4
