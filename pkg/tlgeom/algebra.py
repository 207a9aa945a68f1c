"""
Metric Lie algebras given by structure constants.

Core data types (:class:`StructureConstants`, :class:`InnerProduct`,
:class:`MetricLieAlgebra`), validation of the algebraic axioms and the small
dense linear algebra every other module relies on: SPD solves and
Gram-Schmidt orthonormalization with respect to the metric.

Note:
    Structure constants are stored densely: ``c[i, j, k]`` is the ``k``-th
    coordinate of ``[e_i, e_j]``. All values are 64-bit floats and every
    array held by these types is read-only once constructed.

Example:
    >>> sc = tlgeom.algebra.StructureConstants.from_triplets(3, [(0, 1, 2, 1.0)])
    >>> mla = tlgeom.algebra.MetricLieAlgebra(sc, tlgeom.algebra.InnerProduct(np.eye(3)))
    >>> tlgeom.algebra.validate(mla).ok
    True
"""
import dataclasses
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
import scipy.linalg

import tlgeom

DEFAULT_TOL_JACOBI = 1e-10
DEGENERACY_THRESHOLD = 1e-12

Vector = npt.NDArray[np.float64]
T_MATRIX = Union["InnerProduct", npt.ArrayLike]

# provenance kinds
GENERIC = "generic"
SPECIAL = "special"
ONE_DIM_COMMUTATOR = "one-dim-commutator"
TANGENT_LIFT = "tangent-lift"


class AlgebraError(ValueError):
    """Base class of numerical input faults (shapes, factorizations, degeneracies)."""


class FactorizationError(AlgebraError):
    """Matrix is not symmetric positive definite."""


class DegeneracyError(AlgebraError):
    """Numerically dependent vectors, zero direction or degenerate plane."""


class DimensionError(AlgebraError):
    """Array shapes do not match the algebra dimension."""


@dataclasses.dataclass(frozen=True)
class Violation:
    """A single violated identity, as reported by :func:`validate()`."""

    identity: str
    indices: Tuple[int, ...]
    residual: float

    def __str__(self) -> str:
        return f"{self.identity} {self.indices}: residual {self.residual:.3e}"


@dataclasses.dataclass(frozen=True)
class ValidationResult:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return len(self.violations) == 0

    def identities(self) -> List[str]:
        """Return names of violated identities, without duplicates, in order of appearance."""
        names: List[str] = []
        for violation in self.violations:
            if violation.identity not in names:
                names.append(violation.identity)

        return names

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        lines = [f"{len(self.violations)} violation(s):"]
        lines.extend(f"\t{violation}" for violation in self.violations)

        return "\n".join(lines)


class ValidationError(AlgebraError):
    """Raised where a validated algebra is required but :func:`validate()` failed."""

    def __init__(self, violations: Iterable[Violation], what: str = "metric Lie algebra"):
        self.violations = tuple(violations)
        self.what = what

    def __str__(self) -> str:
        err_msg = f"Invalid {self.what}, {len(self.violations)} violation(s):"
        for violation in self.violations:
            err_msg += f"\n\t{violation}"

        return err_msg


@dataclasses.dataclass(frozen=True)
class Provenance:
    """Where a metric Lie algebra comes from: ``generic``, ``special(n, lambda)``,
    ``one-dim-commutator(n)`` or ``tangent-lift(<parent>)``.
    """

    kind: str = GENERIC
    params: Tuple[Tuple[str, Any], ...] = ()
    parent: Optional["Provenance"] = None

    def __str__(self) -> str:
        if self.kind == TANGENT_LIFT:
            return f"{TANGENT_LIFT}({self.parent})"
        if self.params:
            params_str = ", ".join(f"{key}={value}" for key, value in self.params)
            return f"{self.kind}({params_str})"

        return self.kind


def _frozen(data: npt.ArrayLike) -> np.ndarray:
    array = np.array(data, dtype=np.float64, copy=True)
    array.setflags(write=False)

    return array


@dataclasses.dataclass(frozen=True, eq=False)
class StructureConstants:
    """Dense rank-3 structure constants of an ``n``-dimensional Lie algebra.

    Note:
        The default constructor stores ``c`` as given, so that :func:`validate()`
        can report antisymmetry violations of raw input. Algebras built by
        this package go through :meth:`from_triplets()` or
        :meth:`antisymmetrized()`, which store only ``i < j`` and reflect.
    """

    n: int
    c: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"Algebra dimension must be positive: {self.n}")
        c = _frozen(self.c)
        if c.shape != (self.n, self.n, self.n):
            raise DimensionError(f"Structure constants shape {c.shape} does not match dimension {self.n}.")
        object.__setattr__(self, "c", c)

    @classmethod
    def zeros(cls, n: int) -> "StructureConstants":
        """Abelian structure constants."""
        return cls(n, np.zeros((n, n, n)))

    @classmethod
    def antisymmetrized(cls, n: int, raw: npt.ArrayLike) -> "StructureConstants":
        """Keep brackets ``[e_i, e_j]`` of ``raw`` with ``i < j`` and reflect them.

        Args:
            n: algebra dimension.
            raw: ``n x n x n`` array; entries with ``i >= j`` are ignored.
        """
        raw = np.asarray(raw, dtype=np.float64)
        if raw.shape != (n, n, n):
            raise DimensionError(f"Structure constants shape {raw.shape} does not match dimension {n}.")
        upper = raw * np.triu(np.ones((n, n)), k=1)[:, :, np.newaxis]

        return cls(n, upper - upper.transpose(1, 0, 2))

    @classmethod
    def from_triplets(cls, n: int, triplets: Iterable[Tuple[int, int, int, float]]) -> "StructureConstants":
        """Build structure constants from sparse ``(i, j, k, value)`` entries.

        Args:
            n: algebra dimension.
            triplets: ``value`` is added to the ``k``-th coordinate of
                ``[e_i, e_j]``. Only ``i < j`` is accepted, ``[e_j, e_i]`` is
                reflected automatically.
        """
        raw = np.zeros((n, n, n))
        for i, j, k, value in triplets:
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise DimensionError(f"Structure constant index ({i}, {j}, {k}) out of range for dimension {n}.")
            if i >= j:
                raise AlgebraError(f"Structure constant entries require i < j, got ({i}, {j}, {k}).")
            raw[i, j, k] += value

        return cls.antisymmetrized(n, raw)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.c)))


@dataclasses.dataclass(frozen=True, eq=False)
class InnerProduct:
    """Symmetric positive definite inner-product matrix.

    The Cholesky factor is computed once on construction; failure to factorize
    raises :class:`FactorizationError`, an asymmetric matrix raises
    :class:`ValidationError`.
    """

    g: np.ndarray
    _factor: Any = dataclasses.field(init=False, repr=False)

    def __post_init__(self):
        g = _frozen(self.g)
        if (g.ndim != 2) or (g.shape[0] != g.shape[1]) or (g.shape[0] < 1):
            raise DimensionError(f"Inner product must be a non-empty square matrix, got shape {g.shape}.")
        asymmetric = _asymmetry_violations(g)
        if asymmetric:
            raise ValidationError(asymmetric, "inner product")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "_factor", _cho_factor(g))

    @classmethod
    def identity(cls, n: int) -> "InnerProduct":
        return cls(np.eye(n))

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def inner(self, x: npt.ArrayLike, y: npt.ArrayLike) -> float:
        return float(np.asarray(x) @ self.g @ np.asarray(y))


@dataclasses.dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    """Structure constants, metric and basis labels: the universal input of
    every geometry computation.
    """

    sc: StructureConstants
    metric: InnerProduct
    labels: Tuple[str, ...] = ()
    provenance: Provenance = Provenance()

    def __post_init__(self):
        labels = tuple(self.labels) if self.labels else tuple(f"e{idx + 1}" for idx in range(self.sc.n))
        if self.metric.n != self.sc.n:
            raise DimensionError(f"Metric dimension {self.metric.n} does not match algebra dimension {self.sc.n}.")
        if len(labels) != self.sc.n:
            raise DimensionError(f"Expected {self.sc.n} basis labels, got {len(labels)}: {labels}")
        if len(set(labels)) != len(labels):
            raise DimensionError(f"Basis labels must be unique: {labels}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_arrays(
        cls,
        c: npt.ArrayLike,
        g: npt.ArrayLike,
        labels: Optional[Sequence[str]] = None,
        provenance: Provenance = Provenance(),
    ) -> "MetricLieAlgebra":
        """Build algebra from raw arrays (structure constants stored as given)."""
        c = np.asarray(c, dtype=np.float64)

        return cls(StructureConstants(c.shape[0], c), InnerProduct(g), tuple(labels or ()), provenance)

    @property
    def n(self) -> int:
        return self.sc.n

    @property
    def c(self) -> np.ndarray:
        return self.sc.c

    @property
    def g(self) -> np.ndarray:
        return self.metric.g

    def basis_vector(self, idx: int) -> Vector:
        vector = np.zeros(self.n)
        vector[idx] = 1.0

        return vector

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"Unknown basis label '{label}', available: {tlgeom.utils.get_list_str(self.labels)}")


def _check_vector(mla: MetricLieAlgebra, x: npt.ArrayLike) -> Vector:
    vector = np.asarray(x, dtype=np.float64)
    if vector.shape != (mla.n,):
        raise DimensionError(f"Expected vector of dimension {mla.n}, got shape {vector.shape}.")

    return vector


def bracket(mla: MetricLieAlgebra, x: npt.ArrayLike, y: npt.ArrayLike) -> Vector:
    """Return Lie bracket ``[x, y]`` of two vectors given in the algebra basis."""
    x = _check_vector(mla, x)
    y = _check_vector(mla, y)

    return np.einsum("i,j,ijk->k", x, y, mla.c)


def ad_matrix(mla: MetricLieAlgebra, x: npt.ArrayLike) -> np.ndarray:
    """Return matrix of ``ad_x = [x, .]``: column ``j`` holds ``[x, e_j]``."""
    x = _check_vector(mla, x)

    return np.einsum("i,ijk->kj", x, mla.c)


def inner(mla: MetricLieAlgebra, x: npt.ArrayLike, y: npt.ArrayLike) -> float:
    """Return ``g(x, y)``."""
    return mla.metric.inner(_check_vector(mla, x), _check_vector(mla, y))


def commutator_dimension(mla: MetricLieAlgebra, tol: float = DEFAULT_TOL_JACOBI) -> int:
    """Return dimension of the derived algebra ``[g, g]`` (numerical rank of
    all basis brackets).
    """
    brackets = mla.c.reshape(mla.n * mla.n, mla.n)
    if not np.any(brackets):
        return 0

    return int(np.linalg.matrix_rank(brackets, tol=tol * max(1.0, mla.sc.max_abs())))


def jacobi_residuals(sc: StructureConstants) -> np.ndarray:
    """Return rank-4 array ``J[i, j, k, l]``: ``l``-th coordinate of
    ``[[e_i, e_j], e_k] + [[e_j, e_k], e_i] + [[e_k, e_i], e_j]``.
    """
    c = sc.c

    return (
        np.einsum("ijm,mkl->ijkl", c, c) + np.einsum("jkm,mil->ijkl", c, c) + np.einsum("kim,mjl->ijkl", c, c)
    )


def _asymmetry_violations(g: np.ndarray) -> List[Violation]:
    violations = []
    n = g.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            if g[i, j] != g[j, i]:
                violations.append(Violation("metric symmetry", (i, j), float(abs(g[i, j] - g[j, i]))))

    return violations


def _cho_factor(g: np.ndarray) -> Tuple[np.ndarray, bool]:
    try:
        return scipy.linalg.cho_factor(g, lower=True)
    except (scipy.linalg.LinAlgError, ValueError) as err:
        raise FactorizationError(f"Matrix is not positive definite (Cholesky factorization failed): {err}")


def _metric_violations(g: np.ndarray) -> List[Violation]:
    violations = _asymmetry_violations(g)
    try:
        scipy.linalg.cho_factor(g, lower=True)
    except (scipy.linalg.LinAlgError, ValueError):
        min_eig = float(np.min(np.linalg.eigvalsh((g + g.T) / 2)))
        violations.append(Violation("metric positive definiteness", (), min_eig))

    return violations


def validate(mla: MetricLieAlgebra, tol_jacobi: float = DEFAULT_TOL_JACOBI) -> ValidationResult:
    """Check Lie algebra axioms and the metric.

    Args:
        mla: algebra to check.
        tol_jacobi: relative Jacobi tolerance. Residuals are compared against
            ``tol_jacobi * max(1, max|c|)**2`` since the Jacobi sum is
            quadratic in the structure constants.

    Returns:
        Verdict; ``ok`` iff antisymmetry holds exactly, Jacobi within tolerance
        and the metric is symmetric positive definite. Each violated identity
        is listed with its indices and residual magnitude.
    """
    violations: List[Violation] = []
    c = mla.c
    n = mla.n

    sym = c + c.transpose(1, 0, 2)
    for i, j, k in zip(*np.nonzero(sym)):
        if i <= j:
            violations.append(Violation("antisymmetry", (int(i), int(j), int(k)), float(abs(sym[i, j, k]))))

    threshold = tol_jacobi * max(1.0, mla.sc.max_abs()) ** 2
    residuals = jacobi_residuals(mla.sc)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(n):
                    if abs(residuals[i, j, k, l]) > threshold:
                        violations.append(Violation("jacobi", (i, j, k, l), float(abs(residuals[i, j, k, l]))))

    violations.extend(_metric_violations(mla.g))

    result = ValidationResult(tuple(violations))
    tlgeom.log.debug(f"Validated {mla.provenance} algebra of dimension {n}: {result}")

    return result


def require_valid(mla: MetricLieAlgebra, tol_jacobi: float = DEFAULT_TOL_JACOBI) -> MetricLieAlgebra:
    """Return ``mla`` if it passes :func:`validate()`, raise :class:`ValidationError` otherwise."""
    result = validate(mla, tol_jacobi)
    if not result.ok:
        raise ValidationError(result.violations)

    return mla


def solve_spd(g: T_MATRIX, rhs: npt.ArrayLike) -> np.ndarray:
    """Solve ``g @ w = rhs`` for a symmetric positive definite ``g``.

    Note:
        One step of iterative refinement is applied so the residual max-norm
        stays below ``1e-12 * max(1, |rhs|)`` for well conditioned metrics.

    Args:
        g: inner product or raw square matrix.
        rhs: right-hand side vector, or matrix of right-hand side columns.

    Returns:
        Solution ``w`` with the shape of ``rhs``.
    """
    if isinstance(g, InnerProduct):
        matrix = g.g
        factor = g._factor
    else:
        matrix = np.asarray(g, dtype=np.float64)
        asymmetric = _asymmetry_violations(matrix) if matrix.ndim == 2 and matrix.shape[0] == matrix.shape[1] else []
        if asymmetric:
            raise FactorizationError(f"Matrix is not symmetric: {asymmetric[0]}")
        factor = _cho_factor(matrix)

    rhs = np.asarray(rhs, dtype=np.float64)
    if rhs.shape[0] != matrix.shape[0]:
        raise DimensionError(f"Right-hand side shape {rhs.shape} does not match matrix shape {matrix.shape}.")
    solution = scipy.linalg.cho_solve(factor, rhs)
    solution = solution + scipy.linalg.cho_solve(factor, rhs - matrix @ solution)

    return solution


def orthonormalize(g: T_MATRIX, vectors: Iterable[npt.ArrayLike]) -> List[Vector]:
    """Modified Gram-Schmidt (with one re-orthogonalization pass) of ``vectors``
    in the given order, with respect to the inner product ``g``.

    Raises:
        DegeneracyError: intermediate vector norm below ``DEGENERACY_THRESHOLD``.
    """
    matrix = g.g if isinstance(g, InnerProduct) else np.asarray(g, dtype=np.float64)

    basis: List[Vector] = []
    for idx, vector in enumerate(vectors):
        v = np.array(vector, dtype=np.float64)
        for _ in range(2):
            for u in basis:
                v = v - (u @ matrix @ v) * u
        norm_sq = float(v @ matrix @ v)
        if norm_sq < DEGENERACY_THRESHOLD**2:
            raise DegeneracyError(
                f"Gram-Schmidt: vector #{idx} is numerically dependent on its predecessors (norm^2 = {norm_sq:.3e})."
            )
        basis.append(v / np.sqrt(norm_sq))

    return basis


def gram_schmidt(mla: MetricLieAlgebra) -> List[Vector]:
    """Return a ``g``-orthonormal basis obtained from the canonical basis
    ``e_1, ..., e_n`` processed in index order.
    """
    return orthonormalize(mla.metric, np.eye(mla.n))
