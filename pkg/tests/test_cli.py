import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

jsonschema = pytest.importorskip("jsonschema")

from pathtele.cli import format_value, main, render_json

SCHEMA = json.loads(
    (Path(__file__).resolve().parents[1] / "src/pathtele/data/schema.json").read_text()
)


def read_csv(path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# ")
    header = lines[1].split(",")
    rows = []
    for line in lines[2:]:
        cells = line.split(",")
        row = {}
        for key, cell in zip(header, cells):
            try:
                row[key] = float(cell)
            except ValueError:
                row[key] = cell
        rows.append(row)
    return lines[0], header, rows


# ---------------------------------------------------------------------------
# serialization

def test_format_value_float_digits():
    assert format_value(0.5) == "0.5"
    assert format_value(1.0 / 3.0) == "0.33333333333333331"
    assert format_value(True) == "true"
    assert format_value([1.0, 2.0]) == "1;2"


def test_render_json_is_parseable_and_17_digit():
    text = render_json({"command": "regions"}, [{"v": 1.0 / 3.0, "w": None}])
    doc = json.loads(text)
    assert doc["rows"][0]["v"] == pytest.approx(1.0 / 3.0, abs=5e-17)
    assert doc["rows"][0]["w"] is None
    assert "0.33333333333333331" in text


# ---------------------------------------------------------------------------
# sweep-xy

def test_sweep_xy_csv_contents(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main(["sweep-xy", "--resolution", "0.25", "--output", str(out)])
    assert rc == 0
    echo, header, rows = read_csv(out)
    assert "command=sweep-xy" in echo and "channel=K" in echo
    assert header == [
        "x", "y", "closed_plus", "closed_minus", "sim_plus", "sim_minus",
        "verdict", "dev_plus", "dev_minus",
    ]
    assert len(rows) == 9 * 5
    index = {(r["x"], r["y"]): r for r in rows}
    mid = index[(0.0, 0.5)]
    assert mid["closed_plus"] == pytest.approx(0.5, abs=1e-15)
    assert mid["verdict"] == "none"
    corner = index[(1.0, 1.0)]
    assert corner["closed_minus"] == pytest.approx(1.0, abs=1e-15)
    assert corner["verdict"] == "K-protocol"
    assert all(r["dev_plus"] < 1e-9 and r["dev_minus"] < 1e-9 for r in rows)
    png = out.with_suffix(".png")
    assert png.exists() and png.stat().st_size > 1000


def test_sweep_xy_branch_filter_and_no_plot(tmp_path):
    out = tmp_path / "plusonly.csv"
    rc = main([
        "sweep-xy", "--resolution", "0.5", "--branch", "plus",
        "--no-plot", "--output", str(out),
    ])
    assert rc == 0
    _, header, rows = read_csv(out)
    assert header == ["x", "y", "closed_plus", "sim_plus", "verdict", "dev_plus"]
    assert not out.with_suffix(".png").exists()


def test_sweep_xy_stdout_when_no_output(capsys):
    rc = main(["sweep-xy", "--resolution", "1", "--format", "json"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["config"]["command"] == "sweep-xy"
    assert len(doc["rows"]) == 3 * 2


def test_sweep_xy_rejects_bad_resolution(tmp_path, capsys):
    rc = main(["sweep-xy", "--resolution", "0.3", "--output", str(tmp_path / "x.csv")])
    assert rc == 2
    assert "resolution" in capsys.readouterr().err


def test_unwritable_output_is_usage_error(tmp_path, capsys):
    rc = main([
        "sweep-xy", "--resolution", "1",
        "--output", str(tmp_path / "missing-dir" / "x.csv"),
    ])
    assert rc == 2


# ---------------------------------------------------------------------------
# regions

def test_regions_verdict_map(tmp_path):
    out = tmp_path / "regions.json"
    rc = main(["regions", "--resolution", "0.5", "--format", "json", "--output", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, SCHEMA)
    index = {(r["x"], r["y"]): r for r in doc["rows"]}
    assert index[(-1.0, 1.0)]["protocol"] == "K"
    assert index[(-1.0, 0.0)]["protocol"] == "L"
    assert index[(0.0, 0.5)]["protocol"] == "none"
    assert index[(0.0, 0.5)]["margin"] < 0.0
    assert index[(-1.0, 1.0)]["margin"] == pytest.approx(1.0 / 3.0, abs=1e-12)


# ---------------------------------------------------------------------------
# werner

def test_werner_rows_markers_and_values(tmp_path):
    out = tmp_path / "werner.csv"
    rc = main([
        "werner", "--resolution", "0.25", "--x-values", "-1", "0", "--output", str(out),
    ])
    assert rc == 0
    _, header, rows = read_csv(out)
    assert header[-3:] == ["marker", "dev_plus", "dev_minus"]
    marks = {r["marker"] for r in rows}
    assert {"advantage-threshold", "separability-limit"} <= marks
    at = {(round(r["p"], 6), r["x"]): r for r in rows}
    threshold = at[(0.2, -1.0)]
    assert threshold["closed_plus"] == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert threshold["marker"] == "advantage-threshold"
    sep = at[(round(1.0 / 3.0, 6), -1.0)]
    assert sep["closed_plus"] == pytest.approx(11.0 / 15.0, abs=1e-12)
    assert sep["closed_minus"] == pytest.approx(13.0 / 21.0, abs=1e-12)
    assert sep["marker"] == "separability-limit"
    mixed = at[(0.0, 0.0)]
    assert mixed["closed_plus"] == pytest.approx(0.5, abs=1e-15)
    assert all(r["dev_plus"] < 1e-9 for r in rows)


# ---------------------------------------------------------------------------
# coherence

def test_coherence_matched_curve(tmp_path):
    out = tmp_path / "matched.csv"
    rc = main([
        "coherence", "--resolution", "0.25", "--unitary", "matched", "--output", str(out),
    ])
    assert rc == 0
    _, header, rows = read_csv(out)
    by_c = {round(r["coherence"], 6): r for r in rows}
    assert by_c[0.25]["f_max_closed"] == pytest.approx(5.0 / 7.0, abs=1e-12)
    assert by_c[1.0]["f_max_closed"] == pytest.approx(1.0, abs=1e-12)
    assert by_c[0.0]["f_adv_closed"] == pytest.approx(0.0, abs=1e-15)
    assert all(r["dev"] < 1e-9 for r in rows)


def test_coherence_hadamard_quarter_turn(tmp_path):
    out = tmp_path / "quarter.json"
    rc = main([
        "coherence", "--resolution", "0.5", "--phi-values", "1.5707963267948966",
        "--format", "json", "--output", str(out),
    ])
    assert rc == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, SCHEMA)
    for row in doc["rows"]:
        assert abs(row["f_adv_sim"]) < 1e-10


# ---------------------------------------------------------------------------
# determinism

def test_outputs_are_byte_identical_across_runs(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["werner", "--resolution", "0.5", "--x-values", "-1", "--format", "json"]
    assert main(argv + ["--output", str(a), "--no-plot"]) == 0
    assert main(argv + ["--output", str(b), "--no-plot"]) == 0
    assert a.read_bytes() == b.read_bytes()


# ---------------------------------------------------------------------------
# verify

def test_verify_tampered_tolerance_fails_named(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    rc = main([
        "verify", "--trials", "2", "--samples", "500",
        "--tolerance", "closed-form-grid=1e-18",
        "--output", str(report_path),
    ])
    assert rc == 1
    out = capsys.readouterr().out
    assert "FAIL closed-form-grid" in out
    assert "FAILED: closed-form-grid" in out
    assert out.count("PASS ") == 8

    doc = json.loads(report_path.read_text())
    jsonschema.validate(doc, SCHEMA)
    by_name = {r["name"]: r for r in doc["rows"]}
    assert by_name["closed-form-grid"]["passed"] is False
    assert all(v["passed"] for k, v in by_name.items() if k != "closed-form-grid")
    assert doc["config"]["overrides"] == {"closed-form-grid": 1e-18}


def test_verify_unknown_criterion_is_usage_error(capsys):
    rc = main(["verify", "--tolerance", "bogus=1"])
    assert rc == 2
    assert "bogus" in capsys.readouterr().err


def test_verify_malformed_tolerance_is_usage_error(capsys):
    rc = main(["verify", "--tolerance", "closed-form-grid"])
    assert rc == 2


# ---------------------------------------------------------------------------
# entry point

def test_console_script_installed(tmp_path):
    exe = shutil.which("pathtele")
    if exe is None:
        cmd = [sys.executable, "-m", "pathtele.cli"]
    else:
        cmd = [exe]
    out = tmp_path / "r.json"
    proc = subprocess.run(
        cmd + ["regions", "--resolution", "1", "--format", "json",
               "--no-plot", "--output", str(out)],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    jsonschema.validate(json.loads(out.read_text()), SCHEMA)
