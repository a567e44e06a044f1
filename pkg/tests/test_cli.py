from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from freecurves.algebra import FieldSpec, MultiForm
from freecurves.cigeom import CIModel
from freecurves.cli import main
from freecurves.construct import standard_line

GOLDEN = Path(__file__).parent / "golden"


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(list(argv) + ["--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def x(K, n, i):
    return MultiForm.variable(K, n, i)


def quadric_file(tmp_path, K=FieldSpec(5), eqs=None):
    X = CIModel(K, 3, eqs if eqs is not None else [x(K, 3, 0) * x(K, 3, 2) + x(K, 3, 1) * x(K, 3, 3)])
    path = tmp_path / "input.json"
    path.write_text(json.dumps({"model": X.to_json(), "curve": standard_line(K, 3).to_json()}))
    return path


# -- verify-line ---------------------------------------------------------------


def test_verify_line_pass(tmp_path):
    code, text = run(["verify-line", "--n", "3", "--d", "2", "--db", "1", "--char", "5"], tmp_path)
    assert code == 0
    rep = json.loads(text)
    assert rep["result"]["status"] == "pass"
    assert rep["result"]["splitting"] == "O(1) + O"
    assert rep["schema"] == "freecurves.report/1"


def test_verify_line_wild(tmp_path):
    argv = ["verify-line", "--n", "4", "--d", "2", "--db", "2", "--char", "2"]
    code, text = run(argv, tmp_path)
    rep = json.loads(text)
    assert code == 3
    assert rep["result"]["status"] == "wild"
    assert rep["result"]["profile"]["tame"] is False
    assert rep["result"]["presentation"] == "complex"
    code2, _ = run(argv + ["--allow-wild"], tmp_path, "b.json")
    assert code2 == 0


def test_verify_line_usage_error(tmp_path):
    code, _ = run(["verify-line", "--n", "2", "--d", "2", "--db", "1"], tmp_path)
    assert code == 2
    assert main(["verify-line"]) == 2
    assert main(["no-such-command"]) == 2


def test_global_flags_before_subcommand(tmp_path):
    out = tmp_path / "g.json"
    assert main(["--char", "3", "--out", str(out), "verify-line", "--n", "3", "--d", "2", "--db", "1"]) == 0
    assert json.loads(out.read_text())["inputs"]["char"] == 3


def test_text_format(tmp_path):
    code, text = run(["verify-line", "--n", "3", "--d", "2", "--db", "1", "--format", "text"], tmp_path)
    assert code == 0 and text.startswith("pass")


# -- scan ---------------------------------------------------------------


def test_scan_golden(tmp_path):
    code, text = run(["scan", "--n", "1-5", "--l-max", "2", "--chars", "2,3,5"], tmp_path)
    assert code == 0
    assert text == (GOLDEN / "scan_n1-5_l2_p2-3-5.jsonl").read_text()
    lines = [json.loads(s) for s in text.splitlines()]
    assert lines[0]["command"] == "scan"
    summary = lines[-1]["summary"]
    assert summary["fail"] == 0 and summary["error"] == 0 and summary["wild"] > 0
    for rec in lines[1:-1]:
        tame = rec["profile"]["d_b"] % rec["profile"]["char"] != 0
        assert rec["status"] == ("pass" if tame else "wild")


def test_scan_empty_range(tmp_path):
    code, text = run(["scan", "--n", "", "--chars", "5"], tmp_path)
    lines = [json.loads(s) for s in text.splitlines()]
    assert code == 0 and lines[-1]["summary"]["total"] == 0


def test_scan_parallel_matches_serial(tmp_path):
    argv = ["scan", "--n", "2-4", "--l-max", "1", "--chars", "2,3"]
    _, a = run(argv, tmp_path, "a.jsonl")
    _, b = run(argv + ["--jobs", "2"], tmp_path, "b.jsonl")
    assert a == b


# -- splitting ---------------------------------------------------------------


def test_splitting_quadric(tmp_path):
    code, text = run(["splitting", str(quadric_file(tmp_path))], tmp_path)
    assert code == 0
    res = json.loads(text)["result"]
    assert res["splitting"]["rendered"] == "O(2) + O"
    assert res["status"] == "free"


def test_splitting_schema_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"model": {"char": 5, "n": "three"}, "curve": {"char": 5, "n": 3, "components": []}}))
    code, text = run(["splitting", str(bad)], tmp_path)
    assert code == 2
    err = json.loads(text)["error"]
    assert err["kind"] == "schema"
    pointers = {e["pointer"] for e in err["errors"]}
    assert "/model/n" in pointers and "/curve/components" in pointers


def test_splitting_unreadable_file(tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    assert main(["splitting", str(bad)]) == 2


def test_splitting_containment_failure(tmp_path):
    K = FieldSpec(5)
    path = quadric_file(tmp_path, K, [x(K, 3, 0)])
    code, text = run(["splitting", str(path)], tmp_path)
    assert code == 3
    assert json.loads(text)["error"]["kind"] == "containment"


# -- nodal ---------------------------------------------------------------


def test_nodal_pass_and_determinism(tmp_path):
    argv = ["nodal", "--count", "20", "--rmax", "6", "--seed", "1"]
    code, a = run(argv, tmp_path, "a.json")
    _, b = run(argv, tmp_path, "b.json")
    assert code == 0 and a == b
    rep = json.loads(a)
    assert rep["summary"] == {"total": 20, "passed": 20, "failed": 0}
    assert rep["failures"] == []


def test_nodal_empty(tmp_path):
    code, text = run(["nodal", "--count", "0"], tmp_path)
    assert code == 0 and json.loads(text)["summary"]["total"] == 0


# -- enumerate-lines ---------------------------------------------------------------


def test_enumerate_lines_jsonl(tmp_path):
    K = FieldSpec(2)
    path = tmp_path / "model.json"
    path.write_text(json.dumps(CIModel(K, 3, [x(K, 3, 0) * x(K, 3, 2) + x(K, 3, 1) * x(K, 3, 3)]).to_json()))
    code, text = run(["enumerate-lines", str(path)], tmp_path)
    lines = [json.loads(s) for s in text.splitlines()]
    assert code == 0
    assert lines[-1]["summary"]["found"] == 6
    assert all(rec["verdict"]["splitting"]["degrees"] == [2, 0] for rec in lines[1:-1])
    code, text = run(["enumerate-lines", str(path), "--max-count", "0"], tmp_path, "z.jsonl")
    assert json.loads(text.splitlines()[-1])["summary"]["found"] == 0


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "freecurves.cli", "verify-line", "--n", "3", "--d", "2", "--db", "1", "--char", "5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"]["ok"] is True
