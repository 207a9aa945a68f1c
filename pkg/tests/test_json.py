import json

import numpy as np
import pytest

import tlgeom


def test_remove_comments():
    DATA_STR = """{"family": /*inline with special characters: !@/[]()/\\ */ "special",
    // comment in its own line
    "n": 2, // comment at the end of the line
    /* comment
    block
    in multiple lines */
    "lambda": 0.5,
    "note": "// not a comment"
    }"""
    DATA = {"family": "special", "n": 2, "lambda": 0.5, "note": "// not a comment"}
    data_str = tlgeom.json.remove_comments(DATA_STR)

    assert json.loads(data_str) == DATA
    assert tlgeom.json.loads(DATA_STR) == DATA


def test_read_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        tlgeom.json.read(tmp_path / "missing.json")
    with pytest.raises(FileNotFoundError):
        tlgeom.json.read(tmp_path)

    file_path = tmp_path / "broken.json"
    file_path.write_text('{"n": ', encoding="utf-8")
    with pytest.raises(json.JSONDecodeError):
        tlgeom.json.read(file_path)


def test_write(tmp_path):
    file_path = tmp_path / "jsonTest.json"
    DATA = {"z": 0.1, "a": [1.0, -2.5e-17], "nested": {"x": 1}}

    tlgeom.json.write(DATA, file_path)
    text = file_path.read_text(encoding="utf-8")
    assert text.endswith("}\n")
    assert text.index('"z"') < text.index('"a"')  # insertion order
    assert tlgeom.json.read(file_path) == DATA


def test_dumps_floats_round_trip():
    values = [0.1, 1.0 / 3.0, -2.0 ** -40, 1e300]
    assert json.loads(tlgeom.json.dumps(values)) == values


def test_dumps_full_precision():
    data = {"x": 0.1, "v": (1.0, 1.0 / 3.0), "n": 2, "ok": True, "text": "0.1", "missing": None}

    data_str = tlgeom.json.dumps(data, indent=None, full_precision=True)
    assert data_str == (
        '{"x": 0.10000000000000001, "v": [1.0, 0.33333333333333331], "n": 2, "ok": true, "text": "0.1", "missing": null}'
    )
    assert json.loads(data_str) == {**data, "v": [1.0, 1.0 / 3.0]}
    assert json.loads(tlgeom.json.dumps([float("inf"), -2.5e-17], full_precision=True)) == [float("inf"), -2.5e-17]


def test_rw_jsonpickle(tmp_path):
    file_path = tmp_path / "snapshots" / "report.json"
    entry = tlgeom.harness.make_entry("E5.connection", "nabla(u1, u1)", np.array([0.0, 1.0]), np.array([0.0, 1.0]), 1e-9)
    report = tlgeom.harness.ComparisonReport({"family": "special"}, 1e-9, 7, [entry])

    tlgeom.json.write_jsonpickle(report, file_path)
    r_data = tlgeom.json.read_jsonpickle(file_path)

    assert isinstance(r_data, tlgeom.harness.ComparisonReport)
    assert r_data.seed == 7
    assert r_data.entries[0].oracle == (0.0, 1.0)
    assert r_data.to_dict() == report.to_dict()
