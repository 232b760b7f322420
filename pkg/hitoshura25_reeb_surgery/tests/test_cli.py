"""
Tests for CLI functionality.
"""

import json

import pytest

from hitoshura25_reeb_surgery.cli import build_parser, main, read_input

SINGLE_EDGE = (
    '{"kind": "graph", "version": 1, '
    '"vertices": [{"id": "a", "height": "0"}, {"id": "b", "height": "1"}], '
    '"edges": [{"id": "e1", "src": "a", "dst": "b"}]}'
)

PATH3 = (
    '{"kind": "graph", "version": 1, '
    '"vertices": [{"id": "a"}, {"id": "m"}, {"id": "c"}], '
    '"edges": [{"id": "f1", "src": "a", "dst": "m"}, {"id": "f2", "src": "m", "dst": "c"}]}'
)

SELF_LOOP = (
    '{"kind": "graph", "version": 1, '
    '"vertices": [{"id": "a"}, {"id": "b"}], '
    '"edges": [{"id": "e1", "src": "a", "dst": "b"}, {"id": "e2", "src": "b", "dst": "b"}]}'
)


@pytest.fixture
def sphere(tmp_path):
    path = tmp_path / "sphere.reeb.json"
    path.write_text(SINGLE_EDGE)
    return str(path)


def test_read_input_not_found():
    """Test that a missing input file raises FileNotFoundError."""
    with pytest.raises(FileNotFoundError, match="Input file not found"):
        read_input("/nonexistent/graph.json")


def test_validate_good(sphere, capsys):
    """Test validate on a single edge."""
    assert main(["validate", sphere]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["kind"] == "report"
    assert report["is_good"] is True
    assert report["certificate"] == {"a": 0, "b": 1}


def test_validate_bad(tmp_path, capsys):
    """Test that a bad digraph exits with 1 and lists its violations."""
    path = tmp_path / "loop.reeb.json"
    path.write_text(SELF_LOOP)
    assert main(["validate", str(path)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert [v["tag"] for v in report["violations"]] == ["SelfLoop"]


def test_count_path(tmp_path, capsys):
    """Test that count prints a bare integer."""
    path = tmp_path / "path3.reeb.json"
    path.write_text(PATH3)
    assert main(["count", str(path)]) == 0
    assert capsys.readouterr().out == "1\n"


def test_count_remark5_needs_embedding(tmp_path, capsys):
    """Test that --remark5 without an embedding is a usage error."""
    path = tmp_path / "path3.reeb.json"
    path.write_text(PATH3)
    assert main(["count", str(path), "--remark5"]) == 2
    assert "--host" in capsys.readouterr().err


def test_glue_writes_out_file(sphere, tmp_path):
    """Test that glue writes the X-graph to --out."""
    out = tmp_path / "x.reeb.json"
    code = main(["glue", sphere, "e:e1@1/2", sphere, "e:e1@1/2", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["kind"] == "graph"
    assert len(doc["vertices"]) == 5
    assert len(doc["edges"]) == 4


def test_glue_dot(sphere, capsys):
    """Test glue with DOT output."""
    assert main(["glue", sphere, "e:e1@1/2", sphere, "e:e1@1/2", "--format", "dot"]) == 0
    assert capsys.readouterr().out.count("->") == 4


def test_glue_extremum(sphere, capsys):
    """Test that a wedge point at a minimum exits with 2."""
    assert main(["glue", sphere, "v:a", sphere, "e:e1@1/2"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("Error: ")
    assert "local extremum" in err


def test_missing_file(capsys):
    """Test that a missing input exits with 2."""
    assert main(["validate", "/nonexistent/graph.json"]) == 2
    assert "Input file not found" in capsys.readouterr().err


def test_lax_mode(tmp_path, capsys):
    """Test that --lax accepts unknown fields."""
    path = tmp_path / "extra.reeb.json"
    doc = json.loads(SINGLE_EDGE)
    doc["comment"] = "drawn by hand"
    path.write_text(json.dumps(doc))
    assert main(["validate", str(path)]) == 2
    capsys.readouterr()
    assert main(["validate", "--lax", str(path)]) == 0


def test_realize_then_reeb(sphere, tmp_path, capsys):
    """Test that a realized sphere sweeps back to one edge."""
    mesh = tmp_path / "sphere.mesh.json"
    assert main(["realize", sphere, "--out", str(mesh)]) == 0
    assert main(["reeb", str(mesh)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["vertices"]) == 2
    assert len(doc["edges"]) == 1


def test_iso(sphere, tmp_path, capsys):
    """Test that a digraph is isomorphic to itself."""
    assert main(["iso", sphere, sphere]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["vertex_map"] == {"a": "a", "b": "b"}


def test_export_rejects_obj_for_graphs(sphere, capsys):
    """Test that OBJ export needs a mesh."""
    assert main(["export", sphere, "--format", "obj"]) == 2
    assert "json or dot" in capsys.readouterr().err


def test_verify_suite_json(capsys):
    """Test a single quick criterion as a JSON report."""
    assert main(["verify-suite", "--quick", "--only", "9", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    (criterion,) = report["criteria"]
    assert criterion["number"] == 9
    assert criterion["passed"] is True


def test_cli_main_from_argv(sphere, monkeypatch, capsys):
    """Test main reading its arguments from sys.argv."""
    monkeypatch.setattr("sys.argv", ["hitoshura25-reeb-surgery", "count", sphere])
    assert main() == 0
    assert capsys.readouterr().out == "0\n"


def test_parser_requires_verb():
    """Test that a verb is required."""
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_export_report_written_by_validate(sphere, tmp_path, capsys):
    """Test that a report written with --out is read back by export."""
    report = tmp_path / "r.json"
    assert main(["validate", sphere, "--out", str(report)]) == 0
    assert main(["export", str(report)]) == 0
    assert capsys.readouterr().out == report.read_text()
