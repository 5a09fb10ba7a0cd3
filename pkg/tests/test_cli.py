"""Command-line behavior: exit codes, output bytes, and stream layout."""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from ermodes.cli import main
from ermodes.clausespace import enumerate_clauses, report_to_json
from ermodes.fixtures import fixture_path, fixture_text
from ermodes.ir import serialize_ir
from ermodes.model import Annotation, Attribute, Entity, ERDiagram, FeatureRef
from ermodes.modes import parse_modes

DATA = Path(__file__).parent / "data"
UNI = str(fixture_path("university"))
GOLDEN_MODES = DATA / "university.modes.golden"


def test_validate_accepts_the_fixture(capsys):
    assert main(["validate", UNI]) == 0
    assert capsys.readouterr().out == "ok\n"


def test_validate_rejects_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.erd.json"
    bad.write_text("{nope")
    assert main(["validate", str(bad)]) == 1
    assert capsys.readouterr().err.startswith("invalid:")


def test_validate_rejects_semantic_violations(tmp_path, capsys):
    doc = json.loads(fixture_text("university"))
    doc["relationships"][0]["participants"][0] = "Dean"
    bad = tmp_path / "bad.erd.json"
    bad.write_text(json.dumps(doc))
    assert main(["validate", str(bad)]) == 1
    assert "participant" in capsys.readouterr().err


def test_missing_file_is_an_error_not_a_crash(capsys):
    assert main(["validate", "/nonexistent/x.erd.json"]) == 1
    assert main(["gmc", "--diagram", "/nonexistent/x.erd.json"]) == 1
    err = capsys.readouterr().err
    assert err.count("error:") + err.count("invalid:") == 2


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["gmc"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["gmc", "--diagram", UNI, "--strategy", "bogus"])
    assert exc.value.code == 2


def test_gmc_writes_golden_bytes_to_stdout(capsys):
    assert main(["gmc", "--diagram", UNI]) == 0
    out = capsys.readouterr().out
    assert out.encode("ascii") == GOLDEN_MODES.read_bytes()


def test_gmc_output_flag_writes_the_same_bytes(tmp_path, capsys):
    target = tmp_path / "out.modes"
    assert main(["gmc", "--diagram", UNI, "--output", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_bytes() == GOLDEN_MODES.read_bytes()


def test_gmc_aleph_dialect(capsys):
    assert main(["gmc", "--diagram", UNI, "--dialect", "aleph"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ":- modeh(1, tenure(+professor))."
    assert all(line.startswith(":- modeb(*, ") for line in lines[1:])


def test_paths_lists_routes_per_feature(capsys):
    assert main(["paths", "--diagram", UNI, "--strategy", "shortest-all"]) == 0
    assert capsys.readouterr().out == (
        "Takes.Grade:\n"
        "  Professor -[Advises]-> Student -[Takes]\n"
        "  Professor -[Teaches]-> Course -[Takes]\n"
    )


def test_paths_reports_unreachable_features_on_stderr(tmp_path, capsys):
    island = ERDiagram(
        entities=(Entity("A", (Attribute("t"),)),
                  Entity("C", (Attribute("x"),))),
        relationships=(),
        annotation=Annotation(FeatureRef.attribute("A", "t"),
                              (FeatureRef.attribute("C", "x"),)),
    )
    doc = tmp_path / "island.erd.json"
    doc.write_text(serialize_ir(island))
    assert main(["paths", "--diagram", str(doc)]) == 0
    captured = capsys.readouterr()
    assert captured.out == "C.x:\n"
    assert "no path to C.x" in captured.err


def test_random_subcommand_is_reproducible(capsys):
    argv = ["random", "--diagram", UNI, "--seed", "9", "--num-walks", "6",
            "--max-depth", "2"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    assert first.startswith("mode: tenure(+professor).\n")


def test_gmc_accepts_the_random_strategy(capsys):
    argv = ["gmc", "--diagram", UNI, "--strategy", "random", "--seed", "3"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_enumerate_json_matches_the_library(capsys):
    assert main(["enumerate", "--modes", str(GOLDEN_MODES),
                 "--max-len", "3"]) == 0
    out = capsys.readouterr().out
    modeset = parse_modes(GOLDEN_MODES.read_text())
    expected = report_to_json(enumerate_clauses(modeset, 3).report) + "\n"
    assert out == expected
    assert json.loads(out)["total"] == 7


def test_enumerate_cap_marks_truncation(capsys):
    assert main(["enumerate", "--modes", str(GOLDEN_MODES),
                 "--max-len", "3", "--cap", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["truncated"] is True
    assert doc["total"] == 2


def test_enumerate_table_layout(capsys):
    assert main(["enumerate", "--modes", str(GOLDEN_MODES),
                 "--max-len", "3", "--table"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "length  bodies"
    assert lines[-1].startswith("distinct clause bodies per length")
    assert any(line.startswith("total") and line.endswith("7")
               for line in lines)


def test_enumerate_rejects_bad_mode_files(tmp_path, capsys):
    bad = tmp_path / "bad.modes"
    bad.write_text("mode tenure(+professor).\n")
    assert main(["enumerate", "--modes", str(bad)]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_emit_generic_is_identity_on_canonical_files(capsys):
    assert main(["emit", "--modes", str(GOLDEN_MODES)]) == 0
    assert capsys.readouterr().out.encode("ascii") == GOLDEN_MODES.read_bytes()


def test_emit_boostsrl_header(capsys):
    assert main(["emit", "--modes", str(GOLDEN_MODES),
                 "--dialect", "boostsrl"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "setParam: treeDepth=3."
    assert lines[3] == "mode: tenure(+professor)."


def test_module_entry_point_runs_in_a_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "ermodes.cli", "validate", UNI],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "ok\n"
