"""
Command line front end: input parsing, command dispatch and report output.

Commands (run ``tlgeom <command> --help`` for flags)::

    tlgeom describe <spec>
    tlgeom connection <spec>
    tlgeom curvature <spec> [--sectional | --ricci]
    tlgeom lift <spec> [--out <path>]
    tlgeom verify <spec> [--freeze-golden <path> | --check-golden <path>]
    tlgeom verify --all-fixtures

Exit codes: 0 all compared claims passed (or command succeeded), 1 at least
one required claim failed (the report is still written), 2 input or usage
error.

Input files are JSON (comments allowed) with exactly one of::

    {"family": "special", "n": 2, "lambda": 1.0, "u_metric": [[1, 0], [0, 1]]}
    {"family": "one_dim_commutator", "n": 2, "a": [0, 0], "f": [[0, 1], [-1, 0]]}
    {"generic": {"dimension": 3, "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                 "structure_constants": [{"i": 0, "j": 1, "k": 2, "value": 1.0}],
                 "labels": ["x", "y", "z"]}}
"""
import argparse
import csv
import dataclasses
import io
import json
import logging
import numbers
import pathlib
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

import tlgeom
from tlgeom.algebra import MetricLieAlgebra
from tlgeom.harness import ComparisonReport

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_INPUT_ERROR = 2

FORMATS = ("text", "json", "csv")
REPORT_COLUMNS = ("formula_id", "argument_desc", "claimed", "oracle", "abs_diff", "status", "required")

T_INSTANCE = Union[tlgeom.families.T_SPEC, MetricLieAlgebra]


class InputError(ValueError):
    """Input file does not match the documented schema.

    Args:
        problems: one message per problem, each prefixed with a JSON field
            path such as ``$.generic.metric[1][0]``.
        source: file the input came from.
    """

    def __init__(self, problems: List[str], source: str = ""):
        self.problems = list(problems)
        self.source = source

    def __str__(self) -> str:
        err_msg = f"Invalid input{f' {self.source}' if self.source else ''}:"
        for problem in self.problems:
            err_msg += f"\n\t{problem}"

        return err_msg


INPUT_ERRORS = (
    InputError,
    FileNotFoundError,
    json.JSONDecodeError,
    tlgeom.algebra.AlgebraError,
    tlgeom.families.SpecError,
    tlgeom.harness.HypothesisError,
)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


class _Schema:
    """Collects schema problems while reading nested JSON data."""

    def __init__(self):
        self.problems: List[str] = []

    def problem(self, path: str, msg: str):
        self.problems.append(f"{path}: {msg}")

    def fields(self, data: Dict[str, Any], path: str, required: Sequence[str], optional: Sequence[str] = ()):
        for key in required:
            if key not in data:
                self.problem(f"{path}.{key}", "missing field")
        for key in data:
            if key not in required and key not in optional:
                self.problem(f"{path}.{key}", "unknown field")

    def positive_int(self, value: Any, path: str) -> Optional[int]:
        if not _is_int(value) or value < 1:
            self.problem(path, f"expected positive integer, got {value!r}")
            return None
        return value

    def number(self, value: Any, path: str) -> Optional[float]:
        if not _is_number(value):
            self.problem(path, f"expected number, got {value!r}")
            return None
        return float(value)

    def vector(self, value: Any, n: Optional[int], path: str) -> Optional[np.ndarray]:
        if not isinstance(value, list):
            self.problem(path, f"expected array, got {value!r}")
            return None
        if n is not None and len(value) != n:
            self.problem(path, f"expected {n} entries, got {len(value)}")
            return None
        ok = True
        for idx, item in enumerate(value):
            if not _is_number(item):
                self.problem(f"{path}[{idx}]", f"expected number, got {item!r}")
                ok = False
        return np.array(value, dtype=np.float64) if ok else None

    def matrix(self, value: Any, n: Optional[int], path: str) -> Optional[np.ndarray]:
        if not isinstance(value, list) or (n is not None and len(value) != n):
            self.problem(path, f"expected {n}x{n} array")
            return None
        rows = [self.vector(row, n, f"{path}[{idx}]") for idx, row in enumerate(value)]
        if any(row is None for row in rows):
            return None
        return np.array(rows, dtype=np.float64)


def _parse_special(data: Dict[str, Any], schema: _Schema) -> Optional[tlgeom.families.SpecialGroupSpec]:
    schema.fields(data, "$", ("family", "n", "lambda"), ("u_metric",))
    n = schema.positive_int(data.get("n"), "$.n")
    lam = schema.number(data.get("lambda"), "$.lambda")
    u_metric = schema.matrix(data["u_metric"], n, "$.u_metric") if "u_metric" in data else None
    if schema.problems:
        return None

    return tlgeom.families.SpecialGroupSpec(n, lam, u_metric)


def _parse_one_dim_commutator(data: Dict[str, Any], schema: _Schema) -> Optional[tlgeom.families.OneDimCommutatorSpec]:
    schema.fields(data, "$", ("family", "n", "a", "f"))
    n = schema.positive_int(data.get("n"), "$.n")
    a = schema.vector(data.get("a"), n, "$.a")
    f = schema.matrix(data.get("f"), n, "$.f")
    if schema.problems:
        return None

    return tlgeom.families.OneDimCommutatorSpec(n, a, f)


def _parse_generic(data: Any, schema: _Schema, tol_jacobi: float) -> Optional[MetricLieAlgebra]:
    path = "$.generic"
    if not isinstance(data, dict):
        schema.problem(path, "expected object")
        return None
    schema.fields(data, path, ("dimension", "structure_constants", "metric"), ("labels",))
    n = schema.positive_int(data.get("dimension"), f"{path}.dimension")
    metric = schema.matrix(data.get("metric"), n, f"{path}.metric")

    triplets = []
    entries = data.get("structure_constants")
    if not isinstance(entries, list):
        schema.problem(f"{path}.structure_constants", "expected array")
        entries = []
    for idx, entry in enumerate(entries):
        entry_path = f"{path}.structure_constants[{idx}]"
        if not isinstance(entry, dict):
            schema.problem(entry_path, "expected object with fields i, j, k, value")
            continue
        schema.fields(entry, entry_path, ("i", "j", "k", "value"))
        indices = []
        for key in ("i", "j", "k"):
            value = entry.get(key)
            if not _is_int(value) or (n is not None and not 0 <= value < n):
                schema.problem(f"{entry_path}.{key}", f"expected index in 0...{n - 1 if n else '?'}, got {value!r}")
            indices.append(value)
        value = schema.number(entry.get("value"), f"{entry_path}.value")
        if all(_is_int(i) for i in indices[:2]) and indices[0] >= indices[1]:
            schema.problem(entry_path, f"structure constants are given for i < j only, got i={indices[0]}, j={indices[1]}")
        triplets.append((*indices, value))

    labels = data.get("labels", [])
    if not isinstance(labels, list) or not all(isinstance(label, str) for label in labels):
        schema.problem(f"{path}.labels", "expected array of strings")
    elif labels and n is not None and len(labels) != n:
        schema.problem(f"{path}.labels", f"expected {n} labels, got {len(labels)}")
    elif len(set(labels)) != len(labels):
        schema.problem(f"{path}.labels", "labels must be unique")
    if schema.problems:
        return None

    sc = tlgeom.algebra.StructureConstants.from_triplets(n, triplets)
    mla = MetricLieAlgebra(sc, tlgeom.algebra.InnerProduct(metric), tuple(labels))

    return tlgeom.algebra.require_valid(mla, tol_jacobi)


def parse_data(data: Any, tol_jacobi: float = tlgeom.algebra.DEFAULT_TOL_JACOBI, source: str = "") -> T_INSTANCE:
    """Convert parsed JSON input into a family spec or a validated generic algebra.

    Raises:
        InputError: schema problems, listed with their field paths.
        SpecError: family invariants violated.
        AlgebraError: generic algebra fails validation or its metric is not SPD.
    """
    schema = _Schema()
    if not isinstance(data, dict):
        raise InputError(["$: expected JSON object"], source)

    if ("generic" in data) == ("family" in data):
        raise InputError(["$: expected exactly one of 'family' or 'generic'"], source)

    if "generic" in data:
        schema.fields(data, "$", ("generic",))
        instance = _parse_generic(data["generic"], schema, tol_jacobi)
    elif data["family"] == tlgeom.families.SPECIAL:
        instance = _parse_special(data, schema)
    elif data["family"] == tlgeom.families.ONE_DIM_COMMUTATOR:
        instance = _parse_one_dim_commutator(data, schema)
    else:
        families = tlgeom.utils.get_list_str(tlgeom.families.FAMILIES)
        raise InputError([f"$.family: expected one of {families}, got {data['family']!r}"], source)

    if schema.problems:
        raise InputError(schema.problems, source)

    return instance


def parse_spec(file_path: tlgeom.json.T_PATH, tol_jacobi: float = tlgeom.algebra.DEFAULT_TOL_JACOBI) -> T_INSTANCE:
    """Read input file and return a family spec or a validated generic algebra.

    Raises:
        FileNotFoundError: file does not exist.
        json.JSONDecodeError: JSON syntax error.
        InputError, SpecError, AlgebraError: see :func:`parse_data()`.
    """
    data = tlgeom.json.read(file_path)

    return parse_data(data, tol_jacobi, str(file_path))


def to_input_data(mla: MetricLieAlgebra) -> Dict[str, Any]:
    """Generic input file data of an algebra (nonzero ``i < j`` brackets only)."""
    triplets = []
    for i, j, k in zip(*np.nonzero(mla.c)):
        if i < j:
            triplets.append({"i": int(i), "j": int(j), "k": int(k), "value": float(mla.c[i, j, k])})

    return {
        "generic": {
            "dimension": mla.n,
            "structure_constants": triplets,
            "metric": mla.g.tolist(),
            "labels": list(mla.labels),
        }
    }


def algebra_of(instance: T_INSTANCE) -> MetricLieAlgebra:
    if isinstance(instance, MetricLieAlgebra):
        return instance

    return tlgeom.families.build(instance)


@dataclasses.dataclass
class Output:
    """Rendered result of a command.

    ``payload`` is the JSON body; ``rows`` (with ``columns``) the flat table
    for csv and text; ``lines`` optional free text preceding the table.
    """

    command: str
    payload: Dict[str, Any]
    columns: Tuple[str, ...] = ()
    rows: List[Dict[str, Any]] = dataclasses.field(default_factory=list)
    lines: List[str] = dataclasses.field(default_factory=list)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return tlgeom.utils.float_to_str(value)
    if isinstance(value, (tuple, list)):
        return ";".join(_cell(item) for item in value)

    return str(value)


def render(output: Output, fmt: str, invocation: Sequence[str]) -> str:
    """Render command output; embeds tool version and invocation."""
    header = f"tlgeom {tlgeom.__version__}: {' '.join(invocation)}"
    if fmt == "json":
        document = {"tool": "tlgeom", "version": tlgeom.__version__, "invocation": list(invocation)}
        document.update(output.payload)
        return tlgeom.json.dumps(document, full_precision=True) + "\n"

    if fmt == "csv":
        stream = io.StringIO()
        stream.write(f"# {header}\n")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(output.columns)
        for row in output.rows:
            writer.writerow([_cell(row.get(column)) for column in output.columns])
        return stream.getvalue()

    lines = [f"# {header}"] + output.lines
    if output.rows:
        lines.append("  ".join(output.columns))
    for row in output.rows:
        lines.append("  ".join(_cell(row.get(column)) for column in output.columns))

    return "\n".join(lines) + "\n"


def cmd_describe(args: argparse.Namespace, instance: T_INSTANCE) -> Tuple[Output, int]:
    mla = algebra_of(instance)
    verdict = tlgeom.algebra.validate(mla, args.tol_jacobi)
    payload = {
        "dimension": mla.n,
        "labels": list(mla.labels),
        "provenance": str(mla.provenance),
        "commutator_dimension": tlgeom.algebra.commutator_dimension(mla),
        "validation": {"ok": verdict.ok, "violations": [str(violation) for violation in verdict.violations]},
    }
    rows = [
        {"field": "dimension", "value": mla.n},
        {"field": "labels", "value": " ".join(mla.labels)},
        {"field": "provenance", "value": str(mla.provenance)},
        {"field": "commutator_dimension", "value": payload["commutator_dimension"]},
        {"field": "valid", "value": verdict.ok},
    ]
    rows.extend({"field": "violation", "value": str(violation)} for violation in verdict.violations)

    return Output("describe", payload, ("field", "value"), rows), EXIT_OK


def cmd_connection(args: argparse.Namespace, instance: T_INSTANCE) -> Tuple[Output, int]:
    mla = algebra_of(instance)
    conn = tlgeom.geometry.levi_civita(mla)
    rows = []
    for i in range(mla.n):
        for j in range(mla.n):
            rows.append({"x": mla.labels[i], "y": mla.labels[j], "nabla_x_y": _value_list(conn.gamma[i, j])})
    payload = {"labels": list(mla.labels), "connection": rows}

    return Output("connection", payload, ("x", "y", "nabla_x_y"), rows), EXIT_OK


def _value_list(vector: np.ndarray) -> List[float]:
    return [float(x) for x in vector]


def cmd_curvature(args: argparse.Namespace, instance: T_INSTANCE) -> Tuple[Output, int]:
    mla = algebra_of(instance)
    _, curv = tlgeom.geometry.curvature_of(mla)
    labels = mla.labels
    if args.sectional:
        rows = [
            {"x": labels[i], "y": labels[j], "sectional": value}
            for i, j, value in tlgeom.geometry.sectional_table(mla, curv)
        ]
        columns: Tuple[str, ...] = ("x", "y", "sectional")
        key = "sectional"
    elif args.ricci:
        ric = tlgeom.geometry.ricci_tensor(mla, curv)
        rows = [
            {"x": labels[i], "y": labels[j], "ricci": float(ric[i, j])} for i in range(mla.n) for j in range(mla.n)
        ]
        columns = ("x", "y", "ricci")
        key = "ricci"
    else:
        rows = [
            {"x": labels[i], "y": labels[j], "z": labels[k], "R_x_y_z": _value_list(curv.r[i, j, k])}
            for i, j, k in np.ndindex(mla.n, mla.n, mla.n)
        ]
        columns = ("x", "y", "z", "R_x_y_z")
        key = "curvature"

    return Output("curvature", {"labels": list(labels), key: rows}, columns, rows), EXIT_OK


def cmd_lift(args: argparse.Namespace, instance: T_INSTANCE) -> Tuple[Output, int]:
    lifted = tlgeom.lift.tangent_lift(algebra_of(instance), args.tol_jacobi)
    data = to_input_data(lifted)
    if args.out is None:
        rows = [{"field": "input", "value": tlgeom.json.dumps(data, indent=None)}]
        return Output("lift", data, ("field", "value"), rows), EXIT_OK

    tlgeom.json.write(data, args.out)
    tlgeom.log.info(f"Lifted algebra written to: {args.out}")
    output, code = cmd_describe(args, lifted)
    output.command = "lift"

    return output, code


def _report_lines(name: Optional[str], report: ComparisonReport) -> List[str]:
    lines = []
    title = f"== {name} ==" if name else "=="
    lines.append(title)
    lines.append(f"instance: {tlgeom.json.dumps(report.instance, indent=None)}")
    lines.append(f"tolerance: {tlgeom.utils.float_to_str(report.tolerance)}  seed: {report.seed}")
    lines.append("summary:")
    for formula_id, counts in report.summary().items():
        counts_str = "  ".join(f"{status} {count}" for status, count in counts.items())
        lines.append(f"  {formula_id}: {counts_str}")
    failed = report.failed_required()
    lines.append(f"result: {'PASS' if not failed else f'FAIL ({len(failed)} required entries did not pass)'}")

    return lines


def _report_rows(report: ComparisonReport, name: Optional[str] = None) -> List[Dict[str, Any]]:
    rows = []
    for entry in report.entries:
        row = {column: getattr(entry, column) for column in REPORT_COLUMNS}
        if name is not None:
            row["fixture"] = name
        rows.append(row)

    return rows


def _golden(args: argparse.Namespace, report: ComparisonReport, file_path: pathlib.Path) -> int:
    if args.freeze_golden:
        tlgeom.harness.freeze_golden(report, file_path)
        tlgeom.log.info(f"Golden snapshot written: {file_path}")
        return EXIT_OK
    if args.check_golden:
        mismatches = tlgeom.harness.check_golden(report, file_path, args.tol)
        for mismatch in mismatches:
            tlgeom.log.error(f"Golden mismatch ({file_path}): {mismatch}")
        return EXIT_CLAIM_FAILED if mismatches else EXIT_OK

    return EXIT_OK


def cmd_verify(args: argparse.Namespace, instance: Optional[T_INSTANCE]) -> Tuple[Output, int]:
    golden_path = args.freeze_golden or args.check_golden
    if instance is not None:
        family = "generic" if isinstance(instance, MetricLieAlgebra) else tlgeom.families.family_of(instance)
        report = tlgeom.harness.run_paper_suite(family, instance, args.seed, args.tol, args.jobs, args.trials)
        code = EXIT_OK if report.passed else EXIT_CLAIM_FAILED
        if golden_path:
            code = max(code, _golden(args, report, pathlib.Path(golden_path)))
        output = Output("verify", report.to_dict(), REPORT_COLUMNS, _report_rows(report), _report_lines(None, report))
        return output, code

    reports: Dict[str, Any] = {}
    rows: List[Dict[str, Any]] = []
    lines: List[str] = []
    code = EXIT_OK
    for name, fixture in tlgeom.harness.fixtures().items():
        tlgeom.log.debug(f"Verifying fixture: {name}")
        report = tlgeom.harness.run(fixture, args.seed, args.tol, args.jobs, args.trials)
        if not report.passed:
            code = EXIT_CLAIM_FAILED
        if golden_path:
            code = max(code, _golden(args, report, pathlib.Path(golden_path) / f"{name}.json"))
        reports[name] = report.to_dict()
        rows.extend(_report_rows(report, name))
        lines.extend(_report_lines(name, report))
        lines.append("  ".join(REPORT_COLUMNS))
        lines.extend("  ".join(_cell(row.get(column)) for column in REPORT_COLUMNS) for row in _report_rows(report))

    output = Output("verify", {"reports": reports}, ("fixture",) + REPORT_COLUMNS, rows)
    output.lines = lines
    output.rows = rows if args.format != "text" else []

    return output, code


COMMANDS = {
    "describe": cmd_describe,
    "connection": cmd_connection,
    "curvature": cmd_curvature,
    "lift": cmd_lift,
    "verify": cmd_verify,
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text", help="Output format (default: text).")
    common.add_argument("--output", default=None, help="Output file path (default: standard output).")
    common.add_argument(
        "--tol", type=float, default=tlgeom.geometry.DEFAULT_TOL_CMP, help="Absolute comparison tolerance."
    )
    common.add_argument(
        "--tol-jacobi", type=float, default=tlgeom.algebra.DEFAULT_TOL_JACOBI, help="Relative Jacobi tolerance."
    )
    common.add_argument("--seed", type=int, default=0, help="Seed of random sample planes.")
    common.add_argument(
        "--trials",
        type=int,
        default=tlgeom.geometry.DEFAULT_CONSTANT_TRIALS,
        help="Random planes for constant curvature and sign checks.",
    )
    common.add_argument("--jobs", type=int, default=1, help="Worker threads for scalar comparisons.")
    common.add_argument("-v", "--verbose", action="store_true", help="Log debug messages to standard error.")
    common.add_argument("--log-file", default=None, help="Also write log messages to this file.")

    return common


def create_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        "tlgeom", description="Left-invariant geometry of Lie groups and their tangent groups."
    )
    parser.add_argument("--version", action="version", version=f"tlgeom {tlgeom.__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    describe = subparsers.add_parser("describe", parents=[common], help="Dimension, labels and validation verdict.")
    describe.add_argument("spec", help="Input JSON file.")

    connection = subparsers.add_parser("connection", parents=[common], help="Levi-Civita connection table.")
    connection.add_argument("spec", help="Input JSON file.")

    curvature = subparsers.add_parser("curvature", parents=[common], help="Curvature tensor or tables.")
    curvature.add_argument("spec", help="Input JSON file.")
    group = curvature.add_mutually_exclusive_group()
    group.add_argument("--sectional", action="store_true", help="Sectional curvature of basis planes.")
    group.add_argument("--ricci", action="store_true", help="Ricci tensor on the basis.")

    lift = subparsers.add_parser("lift", parents=[common], help="Tangent Lie algebra as a generic input file.")
    lift.add_argument("spec", help="Input JSON file.")
    lift.add_argument("--out", default=None, help="Write lifted input file here and describe it.")

    verify = subparsers.add_parser("verify", parents=[common], help="Compare published formulas with the oracle.")
    verify.add_argument("spec", nargs="?", default=None, help="Input JSON file of a family instance.")
    verify.add_argument("--all-fixtures", action="store_true", help="Verify every built-in fixture.")
    golden = verify.add_mutually_exclusive_group()
    golden.add_argument("--freeze-golden", default=None, help="Store report snapshot (directory with --all-fixtures).")
    golden.add_argument("--check-golden", default=None, help="Compare report with a stored snapshot.")

    return parser


def _setup_logging(args: argparse.Namespace) -> logging.Logger:
    """Package logger with console (and optional file) handlers, set as the
    default logger while a command runs.
    """
    logger = tlgeom.log.create_logger(set_as_default=False)
    tlgeom.log.remove_handlers(logger)
    tlgeom.log.add_console_hdlr(logger, level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.log_file:
        tlgeom.log.add_file_hdlr(logger, args.log_file)
    tlgeom.log.set_default_logger(logger)
    for file_path in tlgeom.log.get_log_file_paths(logger):
        tlgeom.log.debug(f"Logging to: {file_path}")

    return logger


def _write(text: str, output_path: Optional[str]):
    if output_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(output_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run command line interface and return exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code in (0, None) else EXIT_INPUT_ERROR

    previous_logger = tlgeom.log.get_default_logger()
    logger = _setup_logging(args)
    try:
        if args.command == "verify":
            if (args.spec is None) == (not args.all_fixtures):
                raise InputError(["verify: expected exactly one of <spec> or --all-fixtures"])
            instance = None if args.all_fixtures else parse_spec(args.spec, args.tol_jacobi)
        else:
            instance = parse_spec(args.spec, args.tol_jacobi)
        output, code = COMMANDS[args.command](args, instance)
        _write(render(output, args.format, ["tlgeom"] + argv), args.output)
    except INPUT_ERRORS as err:
        tlgeom.log.error(str(err))
        return EXIT_INPUT_ERROR
    except OSError as err:
        tlgeom.log.error(f"I/O error: {err}")
        return EXIT_INPUT_ERROR
    except Exception as err:
        tlgeom.log.error_with_traceback(f"Unexpected error in '{args.command}': {err}")
        raise
    finally:
        tlgeom.log.remove_handlers(logger)
        tlgeom.log.set_default_logger(previous_logger)

    return code


if __name__ == "__main__":
    sys.exit(main())
