"""
Parametric builders for the two families of Lie groups studied here and
evaluators of every published closed-form formula about them.

* Special groups: ``g = u + span(b)`` with ``u`` an abelian ideal,
  ``[b, x] = x`` on ``u``, ``b`` orthogonal to ``u`` and ``lambda = g(b, b)``.
* One-dim-commutator groups: ``g = Gamma + span(e)`` with ``e`` a unit vector
  spanning the commutator, ``[x, e] = g(a, x) e`` and ``[x, y] = g(f(x), y) e``
  for ``x, y`` in ``Gamma``, ``f`` skew-adjoint.

Closed-form evaluators return a :class:`ClosedFormSet`: claimed values keyed by
formula identifiers from :data:`REGISTRY`. Formulas are evaluated verbatim as
published, signs and factors included; whether they hold is decided by
:mod:`tlgeom.harness` against the generic oracle.

Note:
    The ``f`` matrix uses row convention: ``f[i][j] = g(f(u_i), u_j)``, i.e.
    row ``i`` holds the coordinates of ``f(u_i)``.
"""
import dataclasses
import zlib
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
import numpy.typing as npt
import scipy.linalg

import tlgeom
from tlgeom.algebra import MetricLieAlgebra, Provenance, Vector

SPECIAL = "special"
ONE_DIM_COMMUTATOR = "one_dim_commutator"
FAMILIES = (SPECIAL, ONE_DIM_COMMUTATOR)

BASE = "base"
LIFT = "lift"
CONNECTION = "connection"
CURVATURE = "curvature"
SECTIONAL = "sectional"
RICCI = "ricci"
RICCI_DIRECTION = "ricci_direction"

SAMPLE_COUNT = 20
CLOSURE_TOL = 1e-12

# formula identifier prefix -> what it claims
REGISTRY: Dict[str, str] = {
    "E5": "special family: base connection",
    "L1": "special family: lifted connection",
    "L2": "special family: lifted curvature",
    "T1": "special family: lifted sectional curvature",
    "E12": "special family: lifted Ricci tensor",
    "E16": "one-dim-commutator family: base connection",
    "L3": "one-dim-commutator family: base sectional curvature",
    "L4": "one-dim-commutator family: lifted connection",
    "L5": "one-dim-commutator family: lifted curvature",
    "E20": "one-dim-commutator family: lifted sectional curvature",
    "E21": "one-dim-commutator family: lifted Ricci directions",
}
FAMILY_FORMULAS: Dict[str, Tuple[str, ...]] = {
    SPECIAL: ("E5", "L1", "L2", "T1", "E12"),
    ONE_DIM_COMMUTATOR: ("E16", "L3", "L4", "L5", "E20", "E21"),
}


class SpecError(ValueError):
    """Family specification rejected.

    Args:
        problems: human readable descriptions of each violated requirement.
        triples: ``(i, j, k)`` index triples violating the Jacobi closure.
    """

    def __init__(self, problems: List[str], triples: Tuple[Tuple[int, int, int], ...] = ()):
        self.problems = list(problems)
        self.triples = tuple(triples)

    def __str__(self) -> str:
        err_msg = "Invalid family specification:"
        for problem in self.problems:
            err_msg += f"\n\t{problem}"

        return err_msg


def formula_prefix(formula_id: str) -> str:
    return formula_id.split(".", 1)[0]


@dataclasses.dataclass(frozen=True, eq=False)
class SpecialGroupSpec:
    """Special group: ``n = dim u``, ``lam = g(b, b)``, inner product on ``u``."""

    n: int
    lam: float
    u_metric: Optional[np.ndarray] = None

    def __post_init__(self):
        problems = []
        if self.n < 1:
            raise SpecError([f"dimension n of the abelian ideal must be >= 1, got {self.n}"])
        if not (np.isfinite(self.lam) and self.lam > 0):
            problems.append(f"lambda must be positive, got {self.lam}")
        u_metric = np.eye(self.n) if self.u_metric is None else self.u_metric
        u_metric = tlgeom.algebra._frozen(u_metric)
        if u_metric.shape != (self.n, self.n):
            problems.append(f"u_metric must be {self.n}x{self.n}, got shape {u_metric.shape}")
        else:
            try:
                tlgeom.algebra.InnerProduct(u_metric)
            except tlgeom.algebra.AlgebraError as err:
                problems.append(f"u_metric is not symmetric positive definite: {err}")
        if problems:
            raise SpecError(problems)
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "u_metric", u_metric)

    def describe(self) -> Dict[str, object]:
        return {"family": SPECIAL, "n": self.n, "lambda": self.lam, "u_metric": self.u_metric.tolist()}


def closure_residuals(a: npt.ArrayLike, f: npt.ArrayLike) -> List[Tuple[Tuple[int, int, int], float]]:
    """Return ``((i, j, k), a_i f_jk + a_j f_ki + a_k f_ij)`` for every ``i < j < k``."""
    a = np.asarray(a, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    n = a.shape[0]
    residuals = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                residual = a[i] * f[j, k] + a[j] * f[k, i] + a[k] * f[i, j]
                residuals.append(((i, j, k), float(residual)))

    return residuals


@dataclasses.dataclass(frozen=True, eq=False)
class OneDimCommutatorSpec:
    """One-dim-commutator group: ``n = dim Gamma``, vector ``a`` and skew matrix ``f``."""

    n: int
    a: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise SpecError([f"dimension n of Gamma must be >= 1, got {self.n}"])
        a = tlgeom.algebra._frozen(self.a)
        f = tlgeom.algebra._frozen(self.f)
        problems = []
        if a.shape != (self.n,):
            problems.append(f"a must have {self.n} coordinates, got shape {a.shape}")
        if f.shape != (self.n, self.n):
            problems.append(f"f must be {self.n}x{self.n}, got shape {f.shape}")
        if problems:
            raise SpecError(problems)

        if not np.array_equal(f, -f.T):
            problems.append("f must be skew-symmetric (f = -f^T exactly)")
        if not (np.any(a) or np.any(f)):
            problems.append("(a, f) = (0, 0): the commutator would be zero-dimensional")
        violated = [(triple, residual) for triple, residual in closure_residuals(a, f) if abs(residual) > CLOSURE_TOL]
        for triple, residual in violated:
            problems.append(f"Jacobi closure violated at {triple}: residual {residual}")
        if problems:
            raise SpecError(problems, tuple(triple for triple, _ in violated))

        object.__setattr__(self, "a", a)
        object.__setattr__(self, "f", f)

    def describe(self) -> Dict[str, object]:
        return {"family": ONE_DIM_COMMUTATOR, "n": self.n, "a": self.a.tolist(), "f": self.f.tolist()}

    def apply_f(self, x: npt.ArrayLike) -> Vector:
        """Return coordinates of ``f(x)`` for ``x`` in ``Gamma``."""
        return np.asarray(x) @ self.f


T_SPEC = Union[SpecialGroupSpec, OneDimCommutatorSpec]


def _u_labels(n: int) -> Tuple[str, ...]:
    if n == 1:
        return ("u",)

    return tuple(f"u{idx + 1}" for idx in range(n))


def build_special(spec: SpecialGroupSpec) -> MetricLieAlgebra:
    """Basis ``u_1, ..., u_n, b`` with ``[b, u_i] = u_i``, ``[u_i, u_j] = 0`` and
    metric ``u_metric (+) lambda``.
    """
    n = spec.n
    triplets = [(idx, n, idx, -1.0) for idx in range(n)]  # [u_i, b] = -u_i
    sc = tlgeom.algebra.StructureConstants.from_triplets(n + 1, triplets)
    metric = tlgeom.algebra.InnerProduct(scipy.linalg.block_diag(spec.u_metric, [[spec.lam]]))
    provenance = Provenance(tlgeom.algebra.SPECIAL, (("n", n), ("lambda", spec.lam)))
    mla = MetricLieAlgebra(sc, metric, _u_labels(n) + ("b",), provenance)

    return tlgeom.algebra.require_valid(mla)


def build_one_dim_commutator(spec: OneDimCommutatorSpec) -> MetricLieAlgebra:
    """Basis ``u_1, ..., u_n, e`` (orthonormal) with ``[u_i, e] = a_i e`` and
    ``[u_i, u_j] = f_ij e``.
    """
    n = spec.n
    triplets = [(idx, n, n, float(spec.a[idx])) for idx in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            triplets.append((i, j, n, float(spec.f[i, j])))
    sc = tlgeom.algebra.StructureConstants.from_triplets(n + 1, triplets)
    provenance = Provenance(tlgeom.algebra.ONE_DIM_COMMUTATOR, (("n", n),))
    mla = MetricLieAlgebra(sc, tlgeom.algebra.InnerProduct.identity(n + 1), _u_labels(n) + ("e",), provenance)

    return tlgeom.algebra.require_valid(mla)


def build(spec: T_SPEC) -> MetricLieAlgebra:
    if isinstance(spec, SpecialGroupSpec):
        return build_special(spec)

    return build_one_dim_commutator(spec)


def _spd_from(matrix: np.ndarray) -> np.ndarray:
    spd = matrix.T @ matrix + np.eye(matrix.shape[0])

    return 0.5 * (spd + spd.T)


def random_special(n: int, seed: int) -> SpecialGroupSpec:
    """Random special group spec, deterministic in ``(n, seed)``: ``lambda``
    uniform in ``[0.25, 4]``, ``u_metric = A^T A + I`` with ``A`` uniform in ``[-1, 1]``.
    """
    rng = np.random.default_rng([seed, n, 1])
    lam = rng.uniform(0.25, 4.0)
    u_metric = _spd_from(rng.uniform(-1.0, 1.0, (n, n)))

    return SpecialGroupSpec(n, lam, u_metric)


def random_one_dim_commutator(n: int, seed: int) -> OneDimCommutatorSpec:
    """Random one-dim-commutator spec, deterministic in ``(n, seed)``.

    With probability 1/2 the nilpotent branch ``a = 0`` with random skew ``f``;
    otherwise random nonzero ``a`` and ``f = a w^T - w a^T``, the general
    closure-compatible form for ``a != 0``. Draws with ``(a, f) = (0, 0)`` are
    rejected and redrawn.
    """
    rng = np.random.default_rng([seed, n, 2])
    while True:
        if rng.random() < 0.5:
            a = np.zeros(n)
            raw = rng.uniform(-1.0, 1.0, (n, n))
            f = raw - raw.T
        else:
            a = rng.uniform(-1.0, 1.0, n)
            w = rng.uniform(-1.0, 1.0, n)
            f = np.outer(a, w) - np.outer(w, a)
        if np.any(a) or np.any(f):
            return OneDimCommutatorSpec(n, a, f)


@dataclasses.dataclass(frozen=True, eq=False)
class TensorClaim:
    """Claimed connection or curvature values on basis arguments.

    ``values`` maps a tuple of basis indices (pairs for a connection, triples
    for curvature) to the claimed coordinate vector. Patterns that are not
    published are simply absent.
    """

    kind: str
    algebra: str
    values: Dict[Tuple[int, ...], Vector]
    required: bool = True


@dataclasses.dataclass(frozen=True, eq=False)
class ScalarSample:
    """One claimed scalar (sectional curvature, Ricci entry or Ricci direction)
    together with the arguments needed to evaluate the oracle.
    """

    quantity: str
    algebra: str
    args: Tuple[Vector, ...]
    argument_desc: str
    claimed: float
    required: bool = True


T_CLAIM = Union[TensorClaim, Tuple[ScalarSample, ...]]


@dataclasses.dataclass(frozen=True, eq=False)
class ClosedFormSet:
    family: str
    entries: Dict[str, T_CLAIM]

    def __post_init__(self):
        allowed = FAMILY_FORMULAS[self.family]
        for formula_id in self.entries:
            if formula_prefix(formula_id) not in allowed:
                raise ValueError(f"Formula id '{formula_id}' is not registered for family '{self.family}'.")

    def prefixes(self) -> List[str]:
        prefixes: List[str] = []
        for formula_id in self.entries:
            if formula_prefix(formula_id) not in prefixes:
                prefixes.append(formula_prefix(formula_id))

        return prefixes


def sample_rng(seed: int, formula_id: str, idx: int) -> np.random.Generator:
    """Per-sample generator derived from ``(seed, formula_id, idx)``, so adding
    formulas never perturbs existing samples.
    """
    return np.random.default_rng([seed, zlib.crc32(formula_id.encode("utf-8")), idx])


class _Frame:
    """Coordinates of a family algebra: ``n`` vectors of the distinguished
    subspace (``u`` or ``Gamma``), then the special vector (``b`` or ``e``);
    lifted coordinates put the complete block first.
    """

    def __init__(self, n: int):
        self.n = n
        self.dim = n + 1
        self.lifting = tlgeom.lift.LiftIndexing(self.dim)

    def base(self, x: npt.ArrayLike) -> Vector:
        vector = np.zeros(self.dim)
        vector[: self.n] = x

        return vector

    def special(self) -> Vector:
        vector = np.zeros(self.dim)
        vector[self.n] = 1.0

        return vector

    def lift(self, base_vector: Vector, kind: str) -> Vector:
        vector = np.zeros(2 * self.dim)
        if kind == "c":
            vector[: self.dim] = base_vector
        else:
            vector[self.dim :] = base_vector

        return vector

    def lifted_index(self, idx: int, kind: str) -> int:
        return self.lifting.complete(idx) if kind == "c" else self.lifting.vertical(idx)


def _basis(n: int) -> List[Vector]:
    return list(np.eye(n))


def _orthonormal_pair(g: np.ndarray, rng: np.random.Generator) -> Tuple[Vector, Vector]:
    x, y = tlgeom.algebra.orthonormalize(g, rng.standard_normal((2, g.shape[0])))

    return x, y


def _unit(g: np.ndarray, rng: np.random.Generator) -> Vector:
    return tlgeom.algebra.orthonormalize(g, [rng.standard_normal(g.shape[0])])[0]


def special_closed_forms(spec: SpecialGroupSpec, seed: int = 0, sample_count: int = SAMPLE_COUNT) -> ClosedFormSet:
    """Evaluate every published closed form of the special family.

    Args:
        spec: family instance.
        seed: seed of the random sample planes.
        sample_count: random planes per sectional formula.

    Returns:
        ``E5`` base connection, ``L1`` lifted connection, ``L2`` lifted curvature
        patterns, ``T1`` lifted sectional samples, ``E12`` lifted Ricci entries.
    """
    n = spec.n
    lam = spec.lam
    u_g = spec.u_metric
    frame = _Frame(n)
    b = frame.special()
    entries: Dict[str, T_CLAIM] = {}

    def g(x: Vector, y: Vector) -> float:
        return float(x[:n] @ u_g @ y[:n])

    # base connection
    e5: Dict[Tuple[int, ...], Vector] = {}
    for i in range(frame.dim):
        for j in range(frame.dim):
            x, y = np.eye(frame.dim)[i], np.eye(frame.dim)[j]
            if i < n and j < n:
                e5[(i, j)] = g(x, y) / lam * b
            elif i < n:
                e5[(i, j)] = -x
            else:
                e5[(i, j)] = np.zeros(frame.dim)
    entries["E5.connection"] = TensorClaim(CONNECTION, BASE, e5)

    # lifted connection
    def l1(x: Vector, s: str, y: Vector, t: str, x_is_b: bool, y_is_b: bool) -> Vector:
        lift = frame.lift
        if x_is_b and y_is_b:
            return np.zeros(2 * frame.dim)
        if x_is_b:
            if s == "c":
                return np.zeros(2 * frame.dim)
            return 0.5 * lift(y, "v") if t == "c" else -0.5 * lift(y, "c")
        if y_is_b:
            if (s, t) == ("c", "c"):
                return -lift(x, "c")
            if (s, t) == ("v", "c"):
                return -lift(x, "v")
            if (s, t) == ("v", "v"):
                return -0.5 * lift(x, "c")
            return -0.5 * lift(x, "v")
        if s == t:
            return g(x, y) / lam * lift(b, "c")
        return g(x, y) / (2 * lam) * lift(b, "v")

    l1_values: Dict[Tuple[int, ...], Vector] = {}
    for s in "cv":
        for i in range(frame.dim):
            for t in "cv":
                for j in range(frame.dim):
                    x, y = np.eye(frame.dim)[i], np.eye(frame.dim)[j]
                    key = (frame.lifted_index(i, s), frame.lifted_index(j, t))
                    l1_values[key] = l1(x, s, y, t, i == n, j == n)
    entries["L1.connection"] = TensorClaim(CONNECTION, LIFT, dict(sorted(l1_values.items())))

    # lifted curvature, x, y, z in u
    def uvw(kinds: str, formula: Callable[[Vector, Vector, Vector], Vector]) -> TensorClaim:
        values = {}
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    x, y, z = np.eye(frame.dim)[i], np.eye(frame.dim)[j], np.eye(frame.dim)[k]
                    key = tuple(frame.lifted_index(idx, kind) for idx, kind in zip((i, j, k), kinds))
                    values[key] = formula(x, y, z)
        return TensorClaim(CURVATURE, LIFT, values)

    # x, y in u with b in the slot marked "b" (kinds like "c", "vb", "c")
    def with_b(kinds: Tuple[str, str, str], formula: Callable[[Vector, Vector], Vector]) -> TensorClaim:
        values = {}
        for i in range(n):
            for j in range(n):
                u_args = iter((i, j))
                indices = []
                for kind in kinds:
                    if kind.startswith("b"):
                        indices.append(frame.lifted_index(n, kind[1]))
                    else:
                        indices.append(frame.lifted_index(next(u_args), kind))
                values[tuple(indices)] = formula(np.eye(frame.dim)[i], np.eye(frame.dim)[j])
        return TensorClaim(CURVATURE, LIFT, values)

    c, v = (lambda w: frame.lift(w, "c")), (lambda w: frame.lift(w, "v"))
    zero = np.zeros(2 * frame.dim)
    entries["L2.R_xc_yv_zc"] = uvw("cvc", lambda x, y, z: (g(x, z) * v(y) - g(y, z) * v(x)) / (4 * lam))
    entries["L2.R_xc_yc_zv"] = uvw("ccv", lambda x, y, z: (g(x, z) * v(y) - g(y, z) * v(x)) / (4 * lam))
    entries["L2.R_xc_yc_zc"] = uvw("ccc", lambda x, y, z: (g(x, z) * c(y) - g(y, z) * c(x)) / lam)
    entries["L2.R_xc_yv_zv"] = uvw("cvv", lambda x, y, z: (g(x, z) * c(y) - 4 * g(y, z) * c(x)) / (4 * lam))
    entries["L2.R_xv_yv_zc"] = uvw("vvc", lambda x, y, z: (g(x, z) * c(y) - g(y, z) * c(x)) / (4 * lam))
    entries["L2.R_xv_yv_zv"] = uvw("vvv", lambda x, y, z: (g(x, z) * v(y) - g(y, z) * v(x)) / lam)
    for kinds in ("ccbc", "ccbv", "cvbc", "cvbv", "vvbc", "vvbv"):
        slots = (kinds[0], kinds[1], kinds[2:])
        formula_id = f"L2.R_x{kinds[0]}_y{kinds[1]}_b{kinds[3]}"
        entries[formula_id] = with_b(slots, lambda x, y: zero.copy())
    entries["L2.R_xc_bv_yc"] = with_b(("c", "bv", "c"), lambda x, y: 0.75 * g(x, y) / lam * v(b))
    entries["L2.R_xc_bc_yv"] = with_b(("c", "bc", "v"), lambda x, y: 0.5 * g(x, y) / lam * v(b))
    entries["L2.R_xv_bc_yc"] = with_b(("v", "bc", "c"), lambda x, y: 0.5 * g(x, y) / lam * v(b))
    entries["L2.R_xv_bv_yv"] = with_b(("v", "bv", "v"), lambda x, y: -0.25 * g(x, y) / lam * v(b))
    entries["L2.R_xc_bc_yc"] = with_b(("c", "bc", "c"), lambda x, y: g(x, y) / lam * c(b))
    entries["L2.R_xc_bv_yv"] = with_b(("c", "bv", "v"), lambda x, y: 0.5 * g(x, y) / lam * c(b))
    entries["L2.R_xv_bv_yc"] = with_b(("v", "bv", "c"), lambda x, y: 0.5 * g(x, y) / lam * c(b))
    entries["L2.R_xv_bc_yv"] = with_b(("v", "bc", "v"), lambda x, y: g(x, y) / lam * c(b))

    # lifted sectional curvature: g-orthonormal pairs of u are required, general pairs report-only
    u_basis = tlgeom.algebra.orthonormalize(u_g, np.eye(n))
    names = list(_u_labels(n)) if np.array_equal(u_g, np.eye(n)) else [f"gs({label})" for label in _u_labels(n)]

    def k_xc_yv(x: Vector, y: Vector) -> float:
        return -1.0 / lam + g(x, y) ** 2 / (4 * lam * g(x, x) * g(y, y))

    pair_formulas = {
        "T1.K_xc_yc": ("c", "c", lambda x, y: -1.0 / lam),
        "T1.K_xv_yv": ("v", "v", lambda x, y: -1.0 / lam),
        "T1.K_xc_yv": ("c", "v", k_xc_yv),
    }
    for formula_id, (s, t, formula) in pair_formulas.items():
        samples = []
        for i in range(n):
            for j in range(n):
                if s == t and i >= j:
                    continue
                x, y = frame.base(u_basis[i]), frame.base(u_basis[j])
                desc = f"K({names[i]}^{s}, {names[j]}^{t})"
                samples.append(ScalarSample(SECTIONAL, LIFT, (frame.lift(x, s), frame.lift(y, t)), desc, formula(x, y)))
        if s != t or n > 1:
            for idx in range(sample_count):
                rng = sample_rng(seed, formula_id, idx)
                if s == t:
                    ox, oy = _orthonormal_pair(u_g, rng)
                    desc = f"K(x^{s}, y^{t}) orthonormal sample #{idx}"
                else:
                    # mixed planes are nondegenerate for any unit x, y
                    ox, oy = _unit(u_g, rng), _unit(u_g, rng)
                    desc = f"K(x^{s}, y^{t}) unit sample #{idx}"
                x, y = frame.base(ox), frame.base(oy)
                samples.append(ScalarSample(SECTIONAL, LIFT, (frame.lift(x, s), frame.lift(y, t)), desc, formula(x, y)))
            for idx in range(sample_count):
                rng = sample_rng(seed, f"{formula_id}/general", idx)
                x, y = frame.base(rng.standard_normal(n)), frame.base(rng.standard_normal(n))
                desc = f"K(x^{s}, y^{t}) general sample #{idx}"
                samples.append(
                    ScalarSample(SECTIONAL, LIFT, (frame.lift(x, s), frame.lift(y, t)), desc, formula(x, y), False)
                )
        if samples:
            entries[formula_id] = tuple(samples)

    b_formulas = {
        "T1.K_xc_bc": ("c", "c", -1.0 / lam),
        "T1.K_xc_bv": ("c", "v", -0.75 / lam),
        "T1.K_xv_bc": ("v", "c", -1.0 / lam),
        "T1.K_xv_bv": ("v", "v", 0.25 / lam),
    }
    for formula_id, (s, t, value) in b_formulas.items():
        samples = []
        for i in range(n):
            x = frame.base(u_basis[i])
            desc = f"K({names[i]}^{s}, b^{t})"
            samples.append(ScalarSample(SECTIONAL, LIFT, (frame.lift(x, s), frame.lift(b, t)), desc, value))
        for idx in range(sample_count):
            x = frame.base(_unit(u_g, sample_rng(seed, formula_id, idx)))
            desc = f"K(x^{s}, b^{t}) sample #{idx}"
            samples.append(ScalarSample(SECTIONAL, LIFT, (frame.lift(x, s), frame.lift(b, t)), desc, value))
        entries[formula_id] = tuple(samples)

    # lifted Ricci tensor; published for an orthonormal {u_1, ..., u_n, b}: gating only at lambda = 1 and u_metric = I
    ricci_required = abs(lam - 1.0) <= 1e-12 and np.allclose(u_g, np.eye(n), rtol=0.0, atol=1e-12)

    def projection(x: Vector, y: Vector) -> float:
        return sum(g(x, frame.base(u)) * g(frame.base(u), y) for u in u_basis)

    ricci_formulas = {
        "E12.Ric_xc_yc": ("c", "c", lambda x, y: -(1.75 + 2 * n / lam) * g(x, y) + 1.25 / lam * projection(x, y)),
        "E12.Ric_xv_yv": ("v", "v", lambda x, y: -(0.75 + 2 * n / lam) * g(x, y) + 1.25 / lam * projection(x, y)),
        "E12.Ric_xc_yv": ("c", "v", lambda x, y: 0.0),
    }
    for formula_id, (s, t, formula) in ricci_formulas.items():
        samples = []
        for i in range(n):
            for j in range(n):
                x, y = frame.base(u_basis[i]), frame.base(u_basis[j])
                desc = f"Ric({names[i]}^{s}, {names[j]}^{t})"
                args = (frame.lift(x, s), frame.lift(y, t))
                samples.append(ScalarSample(RICCI, LIFT, args, desc, formula(x, y), ricci_required))
        entries[formula_id] = tuple(samples)
    for s, t in (("c", "c"), ("c", "v"), ("v", "v"), ("v", "c")):
        formula_id = f"E12.Ric_x{s}_b{t}"
        samples = []
        for i in range(n):
            x = frame.base(u_basis[i])
            desc = f"Ric({names[i]}^{s}, b^{t})"
            args = (frame.lift(x, s), frame.lift(b, t))
            samples.append(ScalarSample(RICCI, LIFT, args, desc, 0.0, ricci_required))
        entries[formula_id] = tuple(samples)

    return ClosedFormSet(SPECIAL, entries)


def g2_closed_forms(spec: OneDimCommutatorSpec, seed: int = 0, sample_count: int = SAMPLE_COUNT) -> ClosedFormSet:
    """Evaluate every published closed form of the one-dim-commutator family.

    Args:
        spec: family instance.
        seed: seed of the random sample planes.
        sample_count: random planes per sectional formula.

    Returns:
        ``E16`` base connection, ``L3`` base sectional samples, ``L4`` lifted
        connection, ``L5`` lifted curvature patterns, ``E20`` lifted sectional
        samples, ``E21`` lifted Ricci directions.
    """
    n = spec.n
    frame = _Frame(n)
    e = frame.special()
    a = frame.base(spec.a)
    eye = np.eye(frame.dim)
    entries: Dict[str, T_CLAIM] = {}

    def g(x: Vector, y: Vector) -> float:
        return float(x @ y)

    def f(x: Vector) -> Vector:
        return frame.base(spec.apply_f(x[:n]))

    def big_b(x: Vector, y: Vector) -> float:
        return g(f(x), y)

    c, v = (lambda w: frame.lift(w, "c")), (lambda w: frame.lift(w, "v"))

    # base connection
    e16: Dict[Tuple[int, ...], Vector] = {}
    for i in range(frame.dim):
        for j in range(frame.dim):
            x, y = eye[i], eye[j]
            if i == n and j == n:
                e16[(i, j)] = a.copy()
            elif i == n:
                e16[(i, j)] = -0.5 * f(y) - g(y, a) * e
            elif j == n:
                e16[(i, j)] = -0.5 * f(x)
            else:
                e16[(i, j)] = 0.5 * big_b(x, y) * e
    entries["E16.connection"] = TensorClaim(CONNECTION, BASE, e16)

    # lifted connection
    def l4(x: Vector, s: str, y: Vector, t: str, x_is_e: bool, y_is_e: bool) -> Vector:
        if x_is_e and y_is_e:
            return c(a) if s == t else 0.5 * v(a)
        if x_is_e:
            if (s, t) == ("c", "c"):
                return c(-0.5 * f(y) - g(y, a) * e)
            if (s, t) == ("v", "v"):
                return -0.5 * c(f(y) + g(y, a) * e)
            if (s, t) == ("v", "c"):
                return v(-0.5 * f(y) - g(y, a) * e)
            return 0.5 * v(f(y))
        if y_is_e:
            if (s, t) == ("c", "c"):
                return -0.5 * c(f(x))
            if (s, t) == ("v", "v"):
                return -0.5 * c(f(x) + g(x, a) * e)
            if (s, t) == ("c", "v"):
                return 0.5 * v(f(x))
            return v(0.5 * f(x) + g(a, x) * e)
        if (s, t) == ("c", "c"):
            return 0.5 * big_b(x, y) * c(e)
        if (s, t) == ("v", "v"):
            return np.zeros(2 * frame.dim)
        return 0.5 * big_b(x, y) * v(e)

    l4_values: Dict[Tuple[int, ...], Vector] = {}
    for s in "cv":
        for i in range(frame.dim):
            for t in "cv":
                for j in range(frame.dim):
                    key = (frame.lifted_index(i, s), frame.lifted_index(j, t))
                    l4_values[key] = l4(eye[i], s, eye[j], t, i == n, j == n)
    entries["L4.connection"] = TensorClaim(CONNECTION, LIFT, dict(sorted(l4_values.items())))

    # lifted curvature, only the published argument patterns
    def triples(kinds: str, formula: Callable[[Vector, Vector, Vector], Vector]) -> TensorClaim:
        values = {}
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    key = tuple(frame.lifted_index(idx, kind) for idx, kind in zip((i, j, k), kinds))
                    values[key] = formula(eye[i], eye[j], eye[k])
        return TensorClaim(CURVATURE, LIFT, values)

    def repeated(kinds: str, formula: Callable[[Vector, Vector], Vector]) -> TensorClaim:
        """Patterns R(x, y)y: the last two arguments coincide."""
        values = {}
        for i in range(n):
            for j in range(n):
                key = tuple(frame.lifted_index(idx, kind) for idx, kind in zip((i, j, j), kinds))
                values[key] = formula(eye[i], eye[j])
        return TensorClaim(CURVATURE, LIFT, values)

    def with_e(kinds: str, formula: Callable[[Vector], Vector]) -> TensorClaim:
        """Patterns R(x, e)e."""
        values = {}
        for i in range(n):
            key = (frame.lifted_index(i, kinds[0]), frame.lifted_index(n, kinds[1]), frame.lifted_index(n, kinds[2]))
            values[key] = formula(eye[i])
        return TensorClaim(CURVATURE, LIFT, values)

    def f2(x: Vector) -> Vector:
        return f(f(x))

    entries["L5.R_xc_yc_zc"] = triples(
        "ccc",
        lambda x, y, z: c(-0.25 * big_b(y, z) * f(x) + 0.25 * big_b(x, z) * f(y) + 0.5 * f(z) + g(z, a) * e),
    )
    entries["L5.R_xc_yc_zv"] = triples(
        "ccv",
        lambda x, y, z: v(-0.25 * big_b(y, z) * f(x) + 0.25 * big_b(x, z) * f(y) - 0.5 * big_b(x, y) * f(z)),
    )
    entries["L5.R_xc_yv_yv"] = repeated(
        "cvv", lambda x, y: 0.25 * big_b(x, y) * v(f(x)) + 0.5 * big_b(x, y) * c(f(y) + g(y, a) * e)
    )
    entries["L5.R_xv_yv_yv"] = repeated("vvv", lambda x, y: np.zeros(2 * frame.dim))
    entries["L5.R_xc_ev_ev"] = with_e(
        "cvv", lambda x: c(0.5 * g(f(x), a) * e - 0.25 * (f2(x) + g(f(x), a) * e) - g(a, x) * a)
    )
    entries["L5.R_xv_ec_ec"] = with_e("vcc", lambda x: v(0.5 * g(f(x), a) * e - 0.25 * f2(x) - g(a, x) * a))
    entries["L5.R_xv_ev_ev"] = with_e(
        "vvv", lambda x: v(0.5 * g(f(x), a) * e - 0.25 * f2(x) - 0.5 * g(f(x), a) * e + 0.25 * g(x, a) * a)
    )

    # sectional curvatures on orthonormal arguments of Gamma
    gamma_basis = _basis(n)
    names = _u_labels(n)

    def pair_samples(
        formula_id: str, algebra: str, s: str, t: str, formula: Callable[[Vector, Vector], float], ordered: bool
    ) -> Tuple[ScalarSample, ...]:
        samples = []
        for i in range(n):
            for j in range(n):
                if i == j or (not ordered and i > j):
                    continue
                x, y = frame.base(gamma_basis[i]), frame.base(gamma_basis[j])
                args = (x, y) if algebra == BASE else (frame.lift(x, s), frame.lift(y, t))
                desc = f"K({names[i]}, {names[j]})" if algebra == BASE else f"K({names[i]}^{s}, {names[j]}^{t})"
                samples.append(ScalarSample(SECTIONAL, algebra, args, desc, formula(x, y)))
        for idx in range(sample_count):
            ox, oy = _orthonormal_pair(np.eye(n), sample_rng(seed, formula_id, idx))
            x, y = frame.base(ox), frame.base(oy)
            args = (x, y) if algebra == BASE else (frame.lift(x, s), frame.lift(y, t))
            desc = f"K(x, y) sample #{idx}" if algebra == BASE else f"K(x^{s}, y^{t}) sample #{idx}"
            samples.append(ScalarSample(SECTIONAL, algebra, args, desc, formula(x, y)))
        return tuple(samples)

    def e_samples(formula_id: str, algebra: str, s: str, t: str, formula: Callable[[Vector], float]):
        samples = []
        units = [(names[i], frame.base(gamma_basis[i])) for i in range(n)]
        for idx in range(sample_count):
            units.append((f"x#{idx}", frame.base(_unit(np.eye(n), sample_rng(seed, formula_id, idx)))))
        for name, x in units:
            if algebra == BASE:
                args, desc = (x, e), f"K({name}, e)"
            else:
                args, desc = (frame.lift(x, s), frame.lift(e, t)), f"K({name}^{s}, e^{t})"
            samples.append(ScalarSample(SECTIONAL, algebra, args, desc, formula(x)))
        return tuple(samples)

    def norm_f_sq(x: Vector) -> float:
        return g(f(x), f(x))

    if n > 1:
        entries["L3.K_xy"] = pair_samples("L3.K_xy", BASE, "", "", lambda x, y: -0.75 * big_b(x, y) ** 2, False)
    entries["L3.K_xe"] = e_samples("L3.K_xe", BASE, "", "", lambda x: 0.25 * norm_f_sq(x) - g(a, x) ** 2)

    if n > 1:
        entries["E20.K_xc_yc"] = pair_samples("E20.K_xc_yc", LIFT, "c", "c", lambda x, y: -0.75 * big_b(x, y) ** 2, False)
        entries["E20.K_xc_yv"] = pair_samples("E20.K_xc_yv", LIFT, "c", "v", lambda x, y: -0.5 * big_b(x, y) ** 2, True)
    entries["E20.K_xc_ec"] = e_samples("E20.K_xc_ec", LIFT, "c", "c", lambda x: -0.25 * norm_f_sq(x))
    entries["E20.K_xc_ev"] = e_samples("E20.K_xc_ev", LIFT, "c", "v", lambda x: -0.25 * g(f2(x), x) - g(a, x) ** 2)
    entries["E20.K_xv_ec"] = e_samples("E20.K_xv_ec", LIFT, "v", "c", lambda x: -0.25 * g(f2(x), x) - g(a, x) ** 2)
    entries["E20.K_xv_ev"] = e_samples(
        "E20.K_xv_ev", LIFT, "v", "v", lambda x: 0.25 * norm_f_sq(x) + 0.25 * g(x, a) ** 2
    )
    if n > 1:
        entries["E20.K_xv_yv"] = pair_samples("E20.K_xv_yv", LIFT, "v", "v", lambda x, y: 0.0, False)

    # Ricci directions; sums run over the orthonormal basis of Gamma
    us = [frame.base(u) for u in gamma_basis]
    trace_f2 = sum(g(f2(u), u) for u in us)
    a_sq = sum(g(a, u) ** 2 for u in us)
    entries["E21.r_ec"] = (
        ScalarSample(RICCI_DIRECTION, LIFT, (c(e),), "r(e^c)", -g(a, a) - 0.5 * trace_f2 - 2 * a_sq),
    )
    entries["E21.r_ev"] = (
        ScalarSample(RICCI_DIRECTION, LIFT, (v(e),), "r(e^v)", -0.25 * g(a, a) - 0.5 * trace_f2 - a_sq),
    )
    xc_samples, xv_samples = [], []
    for name, x in zip(names, us):
        f2_sq = sum(g(f2(u), x) ** 2 for u in us)
        xc_claim = -0.5 * g(f2(x), x) - 1.5 * f2_sq - 2 * g(a, x) ** 2
        xv_claim = -0.25 * g(f2(x), x) - 0.75 * f2_sq
        xc_samples.append(ScalarSample(RICCI_DIRECTION, LIFT, (c(x),), f"r({name}^c)", xc_claim))
        xv_samples.append(ScalarSample(RICCI_DIRECTION, LIFT, (v(x),), f"r({name}^v)", xv_claim))
    entries["E21.r_xc"] = tuple(xc_samples)
    entries["E21.r_xv"] = tuple(xv_samples)

    return ClosedFormSet(ONE_DIM_COMMUTATOR, entries)


def closed_forms(spec: T_SPEC, seed: int = 0, sample_count: int = SAMPLE_COUNT) -> ClosedFormSet:
    if isinstance(spec, SpecialGroupSpec):
        return special_closed_forms(spec, seed, sample_count)

    return g2_closed_forms(spec, seed, sample_count)


def family_of(spec: T_SPEC) -> str:
    return SPECIAL if isinstance(spec, SpecialGroupSpec) else ONE_DIM_COMMUTATOR


def iter_samples(cfs: ClosedFormSet) -> Iterator[Tuple[str, ScalarSample]]:
    for formula_id, claim in cfs.entries.items():
        if not isinstance(claim, TensorClaim):
            for sample in claim:
                yield formula_id, sample
