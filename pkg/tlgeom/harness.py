"""
Formula verification harness: every closed-form claim of
:mod:`tlgeom.families` is compared against the generic oracle
:mod:`tlgeom.geometry` evaluated on the constructed (base or lifted) algebra.

A :class:`ComparisonReport` is the product. Failing claims are entries with
status ``fail``, never exceptions; degenerate samples are entries with status
``error``. Entries marked ``required=False`` are reported but never gate.

Besides the published formulas a suite records:

* ``E4.connection``: the lifted-connection closed form
  (:func:`tlgeom.lift.lifted_connection_closed_form()`) vs the lifted oracle.
* ``G1.constant_sectional``: constant curvature ``-1/lambda`` of the special base.
* ``ORC.*``: oracle self-consistency (torsion, metric compatibility and
  curvature symmetries) on base and lift.
* ``SGN.*`` (report-only): sign profile of lifted sectional curvature and,
  for the one-dim-commutator family, the largest eigenvalue of the lifted
  Ricci operator.
"""
import concurrent.futures
import dataclasses
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

import tlgeom
from tlgeom.algebra import MetricLieAlgebra
from tlgeom.families import ScalarSample, TensorClaim
from tlgeom.geometry import ConnectionCoefficients, CurvatureTensor

PASS = "pass"
FAIL = "fail"
ERROR = "error"
STATUSES = (PASS, FAIL, ERROR)

T_VALUE = Union[float, Tuple[float, ...], None]


class HypothesisError(ValueError):
    """Instance does not satisfy the hypotheses of a family suite."""

    def __init__(self, reasons: List[str]):
        self.reasons = list(reasons)

    def __str__(self) -> str:
        err_msg = "Refusing to run formula suite, family hypotheses do not hold:"
        for reason in self.reasons:
            err_msg += f"\n\t{reason}"

        return err_msg


class ReportIntegrityError(RuntimeError):
    """A family formula is missing from a finished report."""


@dataclasses.dataclass
class ComparisonEntry:
    """One claimed-vs-oracle comparison.

    ``abs_diff`` is the max-norm of ``claimed - oracle``; ``status`` is
    ``pass`` iff ``abs_diff <= tolerance``. Entries with status ``error``
    carry ``message`` and no values.
    """

    formula_id: str
    argument_desc: str
    claimed: T_VALUE
    oracle: T_VALUE
    abs_diff: Optional[float]
    status: str
    required: bool = True
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "formula_id": self.formula_id,
            "argument_desc": self.argument_desc,
            "claimed": _jsonable(self.claimed),
            "oracle": _jsonable(self.oracle),
            "abs_diff": self.abs_diff,
            "status": self.status,
            "required": self.required,
        }
        if self.message:
            data["message"] = self.message

        return data


def _jsonable(value: T_VALUE) -> Any:
    if isinstance(value, tuple):
        return list(value)

    return value


def _value(data: Union[float, np.ndarray]) -> T_VALUE:
    array = np.asarray(data, dtype=np.float64)
    if array.ndim == 0:
        return float(array)

    return tuple(float(x) for x in array)


def make_entry(
    formula_id: str,
    argument_desc: str,
    claimed: Union[float, np.ndarray],
    oracle: Union[float, np.ndarray],
    tol: float,
    required: bool = True,
) -> ComparisonEntry:
    """Build an entry; NaN differences never pass."""
    diff = np.atleast_1d(np.asarray(claimed, dtype=np.float64) - np.asarray(oracle, dtype=np.float64))
    abs_diff = float(np.max(np.abs(diff))) if diff.size else 0.0
    status = PASS if abs_diff <= tol else FAIL

    return ComparisonEntry(formula_id, argument_desc, _value(claimed), _value(oracle), abs_diff, status, required)


def error_entry(formula_id: str, argument_desc: str, message: str, required: bool = True) -> ComparisonEntry:
    return ComparisonEntry(formula_id, argument_desc, None, None, None, ERROR, required, message)


@dataclasses.dataclass
class ComparisonReport:
    """Verdict of one suite run.

    Args:
        instance: description of the checked instance (family, parameters,
            provenance, seed).
        tolerance: absolute comparison tolerance used.
        seed: seed of random samples.
        entries: comparisons, in canonical order.
    """

    instance: Dict[str, Any]
    tolerance: float
    seed: int
    entries: List[ComparisonEntry] = dataclasses.field(default_factory=list)

    def summary(self) -> Dict[str, Dict[str, int]]:
        """Tally of statuses per formula id, in order of first appearance."""
        per_formula: Dict[str, Dict[str, int]] = {}
        for entry in self.entries:
            counts = per_formula.setdefault(entry.formula_id, {status: 0 for status in STATUSES})
            counts[entry.status] += 1

        return per_formula

    def failed_required(self) -> List[ComparisonEntry]:
        return [entry for entry in self.entries if entry.required and entry.status != PASS]

    @property
    def passed(self) -> bool:
        """True if every required entry passed."""
        return len(self.failed_required()) == 0

    def entries_of(self, formula_id: str) -> List[ComparisonEntry]:
        return [entry for entry in self.entries if entry.formula_id == formula_id]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "instance": self.instance,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "entries": [entry.to_dict() for entry in self.entries],
            "summary": {"per_formula": self.summary()},
        }


def _label(labels: Optional[Sequence[str]], idx: int) -> str:
    return labels[idx] if labels else f"e{idx + 1}"


def compare_connection(
    claimed: Union[ConnectionCoefficients, TensorClaim],
    oracle: ConnectionCoefficients,
    tol: float = tlgeom.geometry.DEFAULT_TOL_CMP,
    formula_id: str = "connection",
    labels: Optional[Sequence[str]] = None,
) -> List[ComparisonEntry]:
    """Compare claimed ``nabla_{e_i} e_j`` against the oracle.

    Args:
        claimed: full connection (one entry per basis pair) or a claim with
            selected basis pairs.
        oracle: oracle connection of the same algebra.
        tol: absolute tolerance.
        formula_id: id recorded on every entry.
        labels: basis labels for argument descriptions.

    Raises:
        DimensionError: claimed values do not match the oracle dimension.
    """
    if isinstance(claimed, ConnectionCoefficients):
        if claimed.n != oracle.n:
            raise tlgeom.algebra.DimensionError(f"Connection dimensions differ: {claimed.n} != {oracle.n}.")
        values = {(i, j): claimed.gamma[i, j] for i in range(oracle.n) for j in range(oracle.n)}
        required = True
    else:
        values = claimed.values
        required = claimed.required

    entries = []
    for (i, j), value in values.items():
        if np.shape(value) != (oracle.n,):
            raise tlgeom.algebra.DimensionError(
                f"{formula_id}: claimed value for ({i}, {j}) has shape {np.shape(value)}, expected ({oracle.n},)."
            )
        desc = f"nabla({_label(labels, i)}, {_label(labels, j)})"
        entries.append(make_entry(formula_id, desc, value, oracle.gamma[i, j], tol, required))

    return entries


def compare_curvature(
    claimed: Union[CurvatureTensor, TensorClaim],
    oracle: CurvatureTensor,
    tol: float = tlgeom.geometry.DEFAULT_TOL_CMP,
    formula_id: str = "curvature",
    labels: Optional[Sequence[str]] = None,
) -> List[ComparisonEntry]:
    """Compare claimed ``R(e_i, e_j)e_k`` against the oracle, over the claimed
    argument patterns only.
    """
    if isinstance(claimed, CurvatureTensor):
        if claimed.n != oracle.n:
            raise tlgeom.algebra.DimensionError(f"Curvature dimensions differ: {claimed.n} != {oracle.n}.")
        indices = np.ndindex(oracle.n, oracle.n, oracle.n)
        values = {key: claimed.r[key] for key in indices}
        required = True
    else:
        values = claimed.values
        required = claimed.required

    entries = []
    for (i, j, k), value in values.items():
        if np.shape(value) != (oracle.n,):
            raise tlgeom.algebra.DimensionError(
                f"{formula_id}: claimed value for ({i}, {j}, {k}) has shape {np.shape(value)}, expected ({oracle.n},)."
            )
        desc = f"R({_label(labels, i)}, {_label(labels, j)}){_label(labels, k)}"
        entries.append(make_entry(formula_id, desc, value, oracle.r[i, j, k], tol, required))

    return entries


def compare_scalars(
    samples: Sequence[ScalarSample],
    evaluator: Callable[[ScalarSample], float],
    tol: float = tlgeom.geometry.DEFAULT_TOL_CMP,
    formula_id: str = "scalar",
    jobs: int = 1,
) -> List[ComparisonEntry]:
    """Pair every printed scalar value with the oracle value of its arguments.

    Args:
        samples: claimed values with oracle arguments.
        evaluator: oracle, called once per sample.
        tol: absolute tolerance.
        formula_id: id recorded on every entry.
        jobs: number of worker threads. Entry order follows ``samples``
            regardless of scheduling.

    Returns:
        One entry per sample; a degenerate plane or direction gives an
        ``error`` entry.
    """

    def compare(sample: ScalarSample) -> ComparisonEntry:
        try:
            oracle = evaluator(sample)
        except tlgeom.algebra.DegeneracyError as err:
            tlgeom.log.warning(f"{formula_id} {sample.argument_desc}: {err}")
            return error_entry(formula_id, sample.argument_desc, str(err), sample.required)
        return make_entry(formula_id, sample.argument_desc, sample.claimed, oracle, tol, sample.required)

    if jobs > 1 and len(samples) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(compare, samples))

    return [compare(sample) for sample in samples]


@dataclasses.dataclass(frozen=True, eq=False)
class Oracle:
    """Oracle quantities of one algebra, computed once."""

    mla: MetricLieAlgebra
    conn: ConnectionCoefficients
    curv: CurvatureTensor
    basis: Tuple[np.ndarray, ...]

    @classmethod
    def of(cls, mla: MetricLieAlgebra) -> "Oracle":
        conn, curv = tlgeom.geometry.curvature_of(mla)

        return cls(mla, conn, curv, tuple(tlgeom.algebra.gram_schmidt(mla)))

    def evaluate(self, sample: ScalarSample) -> float:
        if sample.quantity == tlgeom.families.SECTIONAL:
            return tlgeom.geometry.sectional(self.mla, self.curv, *sample.args)
        if sample.quantity == tlgeom.families.RICCI:
            return tlgeom.geometry.ricci(self.mla, self.curv, *sample.args, basis=self.basis)
        if sample.quantity == tlgeom.families.RICCI_DIRECTION:
            (x,) = sample.args
            if self.mla.metric.inner(x, x) <= 0.0:
                raise tlgeom.algebra.DegeneracyError("Ricci direction requires a nonzero vector.")
            return tlgeom.geometry.ricci(self.mla, self.curv, x, x, basis=self.basis)

        raise ValueError(f"Unknown scalar quantity: {sample.quantity}")

    def ricci_operator_eigenvalues(self) -> np.ndarray:
        """Eigenvalues of the Ricci operator ``g^-1 Ric`` (ascending)."""
        ric = tlgeom.geometry.ricci_tensor(self.mla, self.curv)
        ric = 0.5 * (ric + ric.T)

        return scipy.linalg.eigh(ric, self.mla.g, eigvals_only=True)


def _residual_entry(formula_id: str, desc: str, result: tlgeom.algebra.ValidationResult, tol: float) -> ComparisonEntry:
    residual = max((violation.residual for violation in result.violations), default=0.0)

    return make_entry(formula_id, desc, 0.0, residual, tol)


def oracle_checks(
    oracle: Oracle, prefix: str, tol: float = tlgeom.geometry.DEFAULT_TOL_CMP
) -> List[ComparisonEntry]:
    """``ORC.<prefix>_connection`` and ``ORC.<prefix>_curvature``: largest
    identity residual above ``tol`` (0 when all identities hold).
    """
    connection = tlgeom.geometry.check_connection(oracle.mla, oracle.conn, tol)
    curvature = tlgeom.geometry.check_curvature(oracle.mla, oracle.curv, tol)

    return [
        _residual_entry(f"ORC.{prefix}_connection", "torsion, metric compatibility", connection, tol),
        _residual_entry(
            f"ORC.{prefix}_curvature", "skew symmetries, pair symmetry, first Bianchi", curvature, tol
        ),
    ]


def sign_entry(oracle: Oracle, trials: int, seed: int, tol: float) -> ComparisonEntry:
    """Report-only: claimed ``1`` (all three sectional signs occur), oracle ``1``
    if positive, negative and zero values were all sampled, else ``0``.
    """
    profile = tlgeom.geometry.sign_profile(oracle.mla, oracle.curv, trials, seed, tol)
    desc = f"lift sectional signs: +{profile.positive} -{profile.negative} 0:{profile.zero}"
    all_signs = 1.0 if min(profile) > 0 else 0.0

    return make_entry("SGN.sign_profile", desc, 1.0, all_signs, tol, required=False)


def compare_claims(
    cfs: tlgeom.families.ClosedFormSet,
    base: Oracle,
    lifted: Oracle,
    tol: float = tlgeom.geometry.DEFAULT_TOL_CMP,
    jobs: int = 1,
) -> List[ComparisonEntry]:
    """Compare every entry of a closed-form set, in registry order."""
    entries: List[ComparisonEntry] = []
    for formula_id, claim in cfs.entries.items():
        if isinstance(claim, TensorClaim):
            oracle = base if claim.algebra == tlgeom.families.BASE else lifted
            if claim.kind == tlgeom.families.CONNECTION:
                entries.extend(compare_connection(claim, oracle.conn, tol, formula_id, oracle.mla.labels))
            else:
                entries.extend(compare_curvature(claim, oracle.curv, tol, formula_id, oracle.mla.labels))
        else:

            def evaluate(sample: ScalarSample) -> float:
                oracle = base if sample.algebra == tlgeom.families.BASE else lifted
                return oracle.evaluate(sample)

            entries.extend(compare_scalars(claim, evaluate, tol, formula_id, jobs))

    return entries


def hypothesis_reasons(mla: MetricLieAlgebra, tol: float = tlgeom.algebra.DEFAULT_TOL_JACOBI) -> List[str]:
    """Reasons why a generic algebra cannot be verified as a family instance."""
    n = mla.n
    dim = tlgeom.algebra.commutator_dimension(mla, tol)
    reasons = []
    if dim != n - 1 or n < 2:
        reasons.append(
            f"special: needs a codimension-1 abelian ideal u and b with [b, x] = x on u, "
            f"but the commutator dimension is {dim} (dimension {n})"
        )
    if dim != 1:
        reasons.append(f"one-dim-commutator: needs commutator dimension 1, but it is {dim}")
    if not reasons:
        reasons.append("generic instances carry no family parameters; submit a family specification")

    return reasons


def _instance(family: str, spec: tlgeom.families.T_SPEC, mla: MetricLieAlgebra, seed: int) -> Dict[str, Any]:
    return {"family": family, "spec": spec.describe(), "provenance": str(mla.provenance), "seed": seed}


def check_integrity(report: ComparisonReport, family: str):
    """Every formula of the family registry appears in the report.

    Raises:
        ReportIntegrityError: a registered formula has no entry.
    """
    prefixes = {tlgeom.families.formula_prefix(entry.formula_id) for entry in report.entries}
    missing = [prefix for prefix in tlgeom.families.FAMILY_FORMULAS[family] if prefix not in prefixes]
    if missing:
        raise ReportIntegrityError(f"Report misses formulas: {tlgeom.utils.get_list_str(missing)}")


def run_paper_suite(
    family: str,
    spec: Union[tlgeom.families.T_SPEC, MetricLieAlgebra],
    seed: int = 0,
    tol: float = tlgeom.geometry.DEFAULT_TOL_CMP,
    jobs: int = 1,
    trials: int = tlgeom.geometry.DEFAULT_CONSTANT_TRIALS,
    sample_count: int = tlgeom.families.SAMPLE_COUNT,
) -> ComparisonReport:
    """Run the complete verification of one family instance.

    Builds the base algebra and its tangent lift, evaluates the oracle on both,
    evaluates the family's closed-form set and compares everything.

    Args:
        family: ``special`` or ``one_dim_commutator``.
        spec: family specification. A generic algebra is refused.
        seed: seed of random sample planes.
        tol: absolute comparison tolerance.
        jobs: worker threads for scalar comparisons.
        trials: random planes for constant curvature and sign checks.
        sample_count: random planes per sectional formula.

    Raises:
        HypothesisError: generic algebra or a spec of the other family.
        SpecError, ValidationError: propagated from the builders.
    """
    if isinstance(spec, MetricLieAlgebra):
        raise HypothesisError(hypothesis_reasons(spec))
    if tlgeom.families.family_of(spec) != family:
        raise HypothesisError([f"specification describes family '{tlgeom.families.family_of(spec)}', not '{family}'"])

    base_mla = tlgeom.families.build(spec)
    base = Oracle.of(base_mla)
    lifted = Oracle.of(tlgeom.lift.tangent_lift(base_mla))
    tlgeom.log.debug(f"Running {family} suite on {base_mla.provenance} (seed {seed}, tol {tol})")

    report = ComparisonReport(_instance(family, spec, base_mla, seed), tol, seed)
    report.entries.extend(oracle_checks(base, "base", tol))
    report.entries.extend(oracle_checks(lifted, "lift", tol))
    closed_form = tlgeom.lift.lifted_connection_closed_form(base_mla)
    report.entries.extend(compare_connection(closed_form, lifted.conn, tol, "E4.connection", lifted.mla.labels))

    if family == tlgeom.families.SPECIAL:
        check = tlgeom.geometry.constant_sectional_check(base_mla, base.curv, trials, seed, tol)
        claimed = -1.0 / spec.lam
        entry = make_entry("G1.constant_sectional", "K on basis and random base planes", claimed, check.value, tol)
        # the deviation bounds every sampled plane, not only the mean
        entry.abs_diff = abs(check.value - claimed) + check.max_deviation
        entry.status = PASS if entry.abs_diff <= tol else FAIL
        report.entries.append(entry)

    cfs = tlgeom.families.closed_forms(spec, seed, sample_count)
    report.entries.extend(compare_claims(cfs, base, lifted, tol, jobs))

    report.entries.append(sign_entry(lifted, trials, seed, tol))
    if family == tlgeom.families.ONE_DIM_COMMUTATOR:
        ricci_max = float(np.max(lifted.ricci_operator_eigenvalues()))
        report.entries.append(
            make_entry("SGN.ricci_max", "largest lifted Ricci eigenvalue (<= 0)", 0.0, max(ricci_max, 0.0), tol, False)
        )

    check_integrity(report, family)
    failed = report.failed_required()
    tlgeom.log.debug(f"Suite finished: {len(report.entries)} entries, {len(failed)} required failures")

    return report


def run_oracle_suite(
    mla: MetricLieAlgebra,
    seed: int = 0,
    tol: float = tlgeom.geometry.DEFAULT_TOL_CMP,
    trials: int = tlgeom.geometry.DEFAULT_CONSTANT_TRIALS,
) -> ComparisonReport:
    """Oracle self-consistency of a generic algebra and its tangent lift, plus
    a report-only record of its sectional curvature (constant value or spread).
    """
    base = Oracle.of(mla)
    lifted = Oracle.of(tlgeom.lift.tangent_lift(mla))
    report = ComparisonReport({"family": "generic", "provenance": str(mla.provenance), "seed": seed}, tol, seed)
    report.entries.extend(oracle_checks(base, "base", tol))
    report.entries.extend(oracle_checks(lifted, "lift", tol))
    closed_form = tlgeom.lift.lifted_connection_closed_form(mla)
    report.entries.extend(compare_connection(closed_form, lifted.conn, tol, "E4.connection", lifted.mla.labels))
    if mla.n >= 2:
        check = tlgeom.geometry.constant_sectional_check(mla, base.curv, trials, seed, tol)
        desc = f"constant sectional curvature (mean {tlgeom.utils.float_to_str(check.value)})"
        report.entries.append(make_entry("ORC.constant_sectional", desc, 0.0, check.max_deviation, tol, False))

    return report


def fixtures() -> Dict[str, Union[tlgeom.families.T_SPEC, MetricLieAlgebra]]:
    """Built-in named instances."""
    a_mixed = np.array([1.0, 0.0, 0.0])
    w_mixed = np.array([0.0, 1.0, 0.0])
    so3 = tlgeom.algebra.StructureConstants.from_triplets(3, [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)])

    return {
        "hyperbolic2": tlgeom.families.SpecialGroupSpec(1, 1.0),
        "special_n2": tlgeom.families.SpecialGroupSpec(2, 1.0),
        "special_scaled": tlgeom.families.SpecialGroupSpec(2, 2.0, np.diag([1.0, 4.0])),
        "heisenberg": tlgeom.families.OneDimCommutatorSpec(2, np.zeros(2), np.array([[0.0, 1.0], [-1.0, 0.0]])),
        "g2_affine": tlgeom.families.OneDimCommutatorSpec(2, np.array([1.0, 0.0]), np.zeros((2, 2))),
        "g2_mixed": tlgeom.families.OneDimCommutatorSpec(
            3, a_mixed, np.outer(a_mixed, w_mixed) - np.outer(w_mixed, a_mixed)
        ),
        "so3": MetricLieAlgebra(so3, tlgeom.algebra.InnerProduct.identity(3)),
    }


def run(
    instance: Union[tlgeom.families.T_SPEC, MetricLieAlgebra],
    seed: int = 0,
    tol: float = tlgeom.geometry.DEFAULT_TOL_CMP,
    jobs: int = 1,
    trials: int = tlgeom.geometry.DEFAULT_CONSTANT_TRIALS,
) -> ComparisonReport:
    """Family suite for a family spec, oracle suite for a generic algebra."""
    if isinstance(instance, MetricLieAlgebra):
        return run_oracle_suite(instance, seed, tol, trials)

    return run_paper_suite(tlgeom.families.family_of(instance), instance, seed, tol, jobs, trials)


def freeze_golden(report: ComparisonReport, file_path: tlgeom.json.T_PATH):
    """Store complete report as a golden snapshot."""
    tlgeom.json.write_jsonpickle(report, file_path)


def check_golden(
    report: ComparisonReport, file_path: tlgeom.json.T_PATH, tol: float = tlgeom.geometry.DEFAULT_TOL_CMP
) -> List[str]:
    """Compare report against a golden snapshot.

    Every snapshot entry must reappear in ``report`` (matched by formula id and
    argument description) with the same status and an oracle value within
    ``tol``. Report entries that are not in the snapshot are not compared, so a
    snapshot may pin a selection of entries.

    Returns:
        Human readable mismatches, empty if the report matches.
    """
    golden: ComparisonReport = tlgeom.json.read_jsonpickle(file_path)
    current = {(entry.formula_id, entry.argument_desc): entry for entry in report.entries}
    mismatches = []
    for frozen in golden.entries:
        where = f"{frozen.formula_id} {frozen.argument_desc}"
        entry = current.get((frozen.formula_id, frozen.argument_desc))
        if entry is None:
            mismatches.append(f"{where}: missing from report")
            continue
        if entry.status != frozen.status:
            mismatches.append(f"{where}: status {entry.status} != golden {frozen.status}")
        if (entry.oracle is None) != (frozen.oracle is None):
            mismatches.append(f"{where}: oracle {entry.oracle} != golden {frozen.oracle}")
        elif entry.oracle is not None:
            oracle, frozen_oracle = np.atleast_1d(entry.oracle), np.atleast_1d(frozen.oracle)
            diff = np.max(np.abs(oracle - frozen_oracle)) if oracle.shape == frozen_oracle.shape else np.inf
            if not diff <= tol:
                values = f"{tlgeom.utils.vector_to_str(oracle)} != golden {tlgeom.utils.vector_to_str(frozen_oracle)}"
                mismatches.append(f"{where}: oracle {values} (difference {diff:.3e})")

    return mismatches
