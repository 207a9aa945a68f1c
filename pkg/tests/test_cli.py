import csv
import io
import json
import logging
import pathlib

import numpy as np
import pytest

import tlgeom
from tlgeom import cli

FIXTURES_DIR = pathlib.Path(__file__).parent.parent / "fixtures"


def _fixture_path(name: str) -> str:
    return str(FIXTURES_DIR / f"{name}.json")


def _write_input(tmp_path: pathlib.Path, data, file_name: str = "input.json") -> str:
    file_path = tmp_path / file_name
    if isinstance(data, str):
        file_path.write_text(data, encoding="utf-8")
    else:
        tlgeom.json.write(data, file_path)

    return str(file_path)


def _csv_rows(text: str):
    lines = text.splitlines()
    assert lines[0].startswith("# tlgeom ")

    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


@pytest.mark.parametrize("name", ["hyperbolic2", "special_n2", "special_scaled", "heisenberg", "g2_affine", "g2_mixed", "so3"])
def test_fixture_files_match_builtin(name):
    instance = cli.parse_spec(_fixture_path(name))
    expected = tlgeom.harness.fixtures()[name]

    mla = cli.algebra_of(instance)
    builtin = cli.algebra_of(expected)
    np.testing.assert_array_equal(mla.c, builtin.c)
    np.testing.assert_array_equal(mla.g, builtin.g)


def test_describe(capsys):
    assert cli.main(["describe", _fixture_path("heisenberg"), "--format", "json"]) == cli.EXIT_OK
    data = json.loads(capsys.readouterr().out)

    assert data["tool"] == "tlgeom"
    assert data["version"] == tlgeom.__version__
    assert data["invocation"][:2] == ["tlgeom", "describe"]
    assert data["dimension"] == 3
    assert data["labels"] == ["u1", "u2", "e"]
    assert data["commutator_dimension"] == 1
    assert data["validation"]["ok"]


def test_lift_round_trip(tmp_path, capsys):
    out_path = tmp_path / "lifted.json"
    code = cli.main(["lift", _fixture_path("hyperbolic2"), "--out", str(out_path), "--format", "json"])
    assert code == cli.EXIT_OK

    data = json.loads(capsys.readouterr().out)
    assert data["dimension"] == 4
    assert data["labels"] == ["u^c", "b^c", "u^v", "b^v"]

    lifted = cli.parse_spec(out_path)
    expected = tlgeom.lift.tangent_lift(tlgeom.families.build(tlgeom.harness.fixtures()["hyperbolic2"]))
    assert lifted.labels == expected.labels
    np.testing.assert_array_equal(lifted.c, expected.c)
    np.testing.assert_array_equal(lifted.g, expected.g)

    assert cli.main(["describe", str(out_path), "--format", "json"]) == cli.EXIT_OK
    assert json.loads(capsys.readouterr().out)["labels"] == ["u^c", "b^c", "u^v", "b^v"]


def test_lift_to_stdout(capsys):
    assert cli.main(["lift", _fixture_path("so3"), "--format", "json"]) == cli.EXIT_OK
    data = json.loads(capsys.readouterr().out)

    assert data["generic"]["dimension"] == 6
    assert data["generic"]["labels"][3] == "e1^v"
    instance = cli.parse_data({"generic": data["generic"]})
    assert instance.n == 6


def test_connection_json(capsys):
    assert cli.main(["connection", _fixture_path("so3"), "--format", "json"]) == cli.EXIT_OK
    rows = json.loads(capsys.readouterr().out)["connection"]

    assert len(rows) == 9
    assert rows[1]["x"] == "e1" and rows[1]["y"] == "e2"
    np.testing.assert_allclose(rows[1]["nabla_x_y"], [0.0, 0.0, 0.5], atol=1e-15)


def test_curvature_sectional_csv(capsys):
    assert cli.main(["curvature", _fixture_path("heisenberg"), "--sectional", "--format", "csv"]) == cli.EXIT_OK
    rows = _csv_rows(capsys.readouterr().out)

    assert [(row["x"], row["y"]) for row in rows] == [("u1", "u2"), ("u1", "e"), ("u2", "e")]
    assert float(rows[0]["sectional"]) == pytest.approx(-0.75, abs=1e-9)
    assert float(rows[1]["sectional"]) == pytest.approx(0.25, abs=1e-9)


def test_curvature_ricci_text(capsys):
    assert cli.main(["curvature", _fixture_path("hyperbolic2"), "--ricci"]) == cli.EXIT_OK
    lines = capsys.readouterr().out.splitlines()

    assert lines[0].startswith("# tlgeom ")
    assert lines[1] == "x  y  ricci"
    assert len(lines) == 2 + 4


def test_verify_csv_deterministic(tmp_path):
    outputs = []
    for idx in range(2):
        out_path = tmp_path / f"report{idx}.csv"
        code = cli.main(
            ["verify", _fixture_path("heisenberg"), "--format", "csv", "--output", str(out_path), "--trials", "10"]
        )
        # the base and lifted sectional claims on (u1, e) contradict each other
        assert code == cli.EXIT_CLAIM_FAILED
        outputs.append(out_path.read_bytes())

    assert outputs[0] == outputs[1]
    rows = _csv_rows(outputs[0].decode("utf-8"))
    assert list(rows[0]) == list(cli.REPORT_COLUMNS)
    assert {row["status"] for row in rows} <= {"pass", "fail", "error"}
    assert any(row["formula_id"] == "L3.K_xe" for row in rows)


def test_verify_json(capsys):
    code = cli.main(["verify", _fixture_path("g2_affine"), "--format", "json", "--trials", "10", "--seed", "4"])
    data = json.loads(capsys.readouterr().out)

    assert code in (cli.EXIT_OK, cli.EXIT_CLAIM_FAILED)
    assert data["seed"] == 4
    assert data["instance"]["family"] == "one_dim_commutator"
    assert data["instance"]["spec"]["a"] == [1.0, 0.0]
    assert set(data["summary"]["per_formula"]) >= {"E16.connection", "L4.connection", "E21.r_ev"}
    failed = [entry for entry in data["entries"] if entry["required"] and entry["status"] != "pass"]
    assert (code == cli.EXIT_CLAIM_FAILED) == bool(failed)


def test_verify_golden(tmp_path):
    golden_path = tmp_path / "golden.json"
    args = ["verify", _fixture_path("g2_mixed"), "--trials", "10", "--output", str(tmp_path / "report.txt")]

    frozen = cli.main(args + ["--freeze-golden", str(golden_path)])
    assert golden_path.exists()
    assert cli.main(args + ["--check-golden", str(golden_path)]) == frozen

    other = ["verify", _fixture_path("g2_affine"), "--trials", "10", "--output", str(tmp_path / "other.txt")]
    assert cli.main(other + ["--check-golden", str(golden_path)]) == cli.EXIT_CLAIM_FAILED


def test_closure_violation(tmp_path, capsys):
    f = [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]]
    file_path = _write_input(tmp_path, {"family": "one_dim_commutator", "n": 3, "a": [1.0, 0.0, 0.0], "f": f})

    assert cli.main(["verify", file_path]) == cli.EXIT_INPUT_ERROR
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "(0, 1, 2)" in captured.err


@pytest.mark.parametrize(
    "argv",
    [
        ["describe", "does_not_exist.json"],
        ["verify"],
        ["verify", _fixture_path("heisenberg"), "--all-fixtures"],
        ["verify", _fixture_path("so3")],
        ["unknown-command"],
        ["describe", _fixture_path("so3"), "--format", "xml"],
    ],
)
def test_input_errors(argv):
    assert cli.main(argv) == cli.EXIT_INPUT_ERROR


def test_invalid_json(tmp_path):
    file_path = _write_input(tmp_path, '{"family": "special", "n": 2,')
    assert cli.main(["describe", file_path]) == cli.EXIT_INPUT_ERROR


def test_version(capsys):
    assert cli.main(["--version"]) == cli.EXIT_OK
    assert tlgeom.__version__ in capsys.readouterr().out


def test_schema_field_paths():
    data = {
        "generic": {
            "dimension": 2,
            "structure_constants": [{"i": 1, "j": 0, "k": 0, "value": 1.0}],
            "metric": [[1.0, 0.0], [0.0, "x"]],
            "colour": "red",
        }
    }
    with pytest.raises(cli.InputError) as err:
        cli.parse_data(data, source="test.json")

    problems = err.value.problems
    assert any(problem.startswith("$.generic.metric[1][1]: expected number") for problem in problems)
    assert any(problem.startswith("$.generic.structure_constants[0]: ") for problem in problems)
    assert "$.generic.colour: unknown field" in problems
    assert "test.json" in str(err.value)


@pytest.mark.parametrize(
    "data,path",
    [
        ([], "$"),
        ({"family": "special", "generic": {}}, "$"),
        ({"family": "other"}, "$.family"),
        ({"family": "special", "n": 0, "lambda": 1.0}, "$.n"),
        ({"family": "special", "n": 2}, "$.lambda"),
        ({"family": "one_dim_commutator", "n": 2, "a": [0.0], "f": [[0.0, 1.0], [-1.0, 0.0]]}, "$.a"),
        ({"generic": {"dimension": 2, "structure_constants": [], "metric": [[1.0, 0.0], [0.0, 1.0]], "labels": ["x", "x"]}}, "$.generic.labels"),
    ],
)
def test_schema_errors(data, path):
    with pytest.raises(cli.InputError) as err:
        cli.parse_data(data)
    assert any(problem.startswith(f"{path}:") or problem.startswith(f"{path}.") for problem in err.value.problems)


def test_generic_validation_errors():
    metric = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    jacobi = [
        {"i": 0, "j": 1, "k": 1, "value": 1.0},
        {"i": 0, "j": 2, "k": 0, "value": 1.0},
        {"i": 1, "j": 2, "k": 0, "value": 1.0},
    ]
    with pytest.raises(tlgeom.algebra.ValidationError):
        cli.parse_data({"generic": {"dimension": 3, "structure_constants": jacobi, "metric": metric}})

    not_spd = [[1.0, 0.0], [0.0, -1.0]]
    with pytest.raises(tlgeom.algebra.FactorizationError):
        cli.parse_data({"generic": {"dimension": 2, "structure_constants": [], "metric": not_spd}})


def test_log_file(tmp_path):
    log_path = tmp_path / "logs" / "run.log"
    out_path = tmp_path / "report.txt"
    argv = ["verify", _fixture_path("hyperbolic2"), "-v", "--log-file", str(log_path), "--output", str(out_path)]
    argv += ["--trials", "10"]

    previous_logger = tlgeom.log.get_default_logger()
    cli.main(argv)
    assert "Running special suite" in log_path.read_text(encoding="utf-8")
    assert f"Logging to: {log_path}" in log_path.read_text(encoding="utf-8")
    assert out_path.read_text(encoding="utf-8").startswith("# tlgeom ")
    # handlers are released and the previous default logger is back once the command finished
    assert logging.getLogger(tlgeom.log.PACKAGE_LOGGER_NAME).handlers == []
    assert tlgeom.log.get_default_logger() is previous_logger


def test_render_header():
    output = cli.Output("describe", {"dimension": 2}, ("field", "value"), [{"field": "valid", "value": True}])

    text = cli.render(output, "text", ["tlgeom", "describe", "x.json"])
    assert text == f"# tlgeom {tlgeom.__version__}: tlgeom describe x.json\nfield  value\nvalid  true\n"

    rows = _csv_rows(cli.render(output, "csv", ["tlgeom"]))
    assert rows == [{"field": "valid", "value": "true"}]


def _as_cell(value) -> str:
    """Csv cell text of a JSON value parsed with floats kept as their literal text."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, list):
        return ";".join(_as_cell(item) for item in value)

    return str(value)


def test_verify_json_and_csv_agree(tmp_path):
    json_path, csv_path = tmp_path / "report.json", tmp_path / "report.csv"
    args = ["verify", _fixture_path("special_scaled"), "--trials", "10"]

    json_code = cli.main(args + ["--format", "json", "--output", str(json_path)])
    assert cli.main(args + ["--format", "csv", "--output", str(csv_path)]) == json_code != cli.EXIT_INPUT_ERROR
    entries = json.loads(json_path.read_text(encoding="utf-8"), parse_float=str)["entries"]
    rows = _csv_rows(csv_path.read_text(encoding="utf-8"))

    assert len(entries) == len(rows)
    for entry, row in zip(entries, rows):
        assert {column: _as_cell(entry[column]) for column in cli.REPORT_COLUMNS} == row
    tokens = [entry["abs_diff"] for entry in entries if isinstance(entry["abs_diff"], str)]
    assert any(len(token.split("e")[0].lstrip("-").replace(".", "").lstrip("0")) == 17 for token in tokens)


def test_verify_all_fixtures_committed_golden(tmp_path, capsys):
    golden_dir = pathlib.Path(__file__).parent.parent / "golden"
    argv = ["verify", "--all-fixtures", "--check-golden", str(golden_dir), "--output", str(tmp_path / "report.txt")]

    code = cli.main(argv)
    assert code == cli.EXIT_CLAIM_FAILED  # required closed forms fail on several fixtures
    assert "Golden mismatch" not in capsys.readouterr().err


def test_output_is_directory(tmp_path, capsys):
    code = cli.main(["describe", _fixture_path("so3"), "--output", str(tmp_path)])

    assert code == cli.EXIT_INPUT_ERROR
    assert "I/O error" in capsys.readouterr().err
    assert list(tmp_path.iterdir()) == []
