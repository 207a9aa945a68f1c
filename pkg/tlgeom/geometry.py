"""
Left-invariant Riemannian geometry of a metric Lie algebra, computed from the
structure constants alone: coadjoint operators, Levi-Civita connection
(Koszul formula), Riemann curvature, sectional and Ricci curvature.

Every closed-form formula is compared against this module; nothing here
uses a family-specific formula.

Conventions:
    ``ad*_x`` is the metric adjoint of ``ad_x``: ``g(ad*_x y, z) = g(y, [x, z])``.
    ``R(x, y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_[x,y] z``.
    ``K(x, y) = g(R(x, y)y, x) / (g(x, x)g(y, y) - g(x, y)^2)``.
    ``Ric(x, y) = sum_i g(R(u_i, x)y, u_i)`` over a ``g``-orthonormal basis.
"""
import dataclasses
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

import tlgeom
from tlgeom.algebra import MetricLieAlgebra, Vector, Violation, ValidationResult

DEFAULT_TOL_CMP = 1e-9
DEFAULT_CONSTANT_TRIALS = 100
PLANE_DEGENERACY_THRESHOLD = 1e-12


@dataclasses.dataclass(frozen=True, eq=False)
class ConnectionCoefficients:
    """``gamma[i, j, k]`` is the ``k``-th coordinate of ``nabla_{e_i} e_j``."""

    n: int
    gamma: np.ndarray

    def __post_init__(self):
        gamma = tlgeom.algebra._frozen(self.gamma)
        if gamma.shape != (self.n, self.n, self.n):
            raise tlgeom.algebra.DimensionError(f"Connection shape {gamma.shape} does not match dimension {self.n}.")
        object.__setattr__(self, "gamma", gamma)

    def covariant(self, x: npt.ArrayLike, y: npt.ArrayLike) -> Vector:
        """Return ``nabla_x y`` for constant-coefficient (left-invariant) fields."""
        return np.einsum("i,j,ijk->k", x, y, self.gamma)


@dataclasses.dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """``r[i, j, k, l]`` is the ``l``-th coordinate of ``R(e_i, e_j)e_k``."""

    n: int
    r: np.ndarray

    def __post_init__(self):
        r = tlgeom.algebra._frozen(self.r)
        if r.shape != (self.n,) * 4:
            raise tlgeom.algebra.DimensionError(f"Curvature shape {r.shape} does not match dimension {self.n}.")
        object.__setattr__(self, "r", r)

    def apply(self, x: npt.ArrayLike, y: npt.ArrayLike, z: npt.ArrayLike) -> Vector:
        """Return ``R(x, y)z``."""
        return np.einsum("i,j,k,ijkl->l", x, y, z, self.r)


class ConstantCurvature(NamedTuple):
    is_constant: bool
    value: float
    max_deviation: float


class SignProfile(NamedTuple):
    positive: int
    negative: int
    zero: int


def coadjoint(mla: MetricLieAlgebra, x: npt.ArrayLike, y: npt.ArrayLike) -> Vector:
    """Return ``ad*_x y``: assemble ``v_k = g(y, [x, e_k])`` and solve ``g w = v``."""
    y = tlgeom.algebra._check_vector(mla, y)
    v = tlgeom.algebra.ad_matrix(mla, x).T @ mla.g @ y

    return tlgeom.algebra.solve_spd(mla.metric, v)


def coadjoint_table(mla: MetricLieAlgebra) -> np.ndarray:
    """Return ``W[i, j, :] = ad*_{e_i} e_j`` for all basis pairs."""
    n = mla.n
    v = np.einsum("jl,ikl->ijk", mla.g, mla.c)
    w = tlgeom.algebra.solve_spd(mla.metric, v.reshape(n * n, n).T)

    return w.T.reshape(n, n, n)


def levi_civita(mla: MetricLieAlgebra) -> ConnectionCoefficients:
    """Levi-Civita connection of the left-invariant metric, via the Koszul
    formula ``nabla_x y = 1/2 ([x, y] - ad*_x y - ad*_y x)``.
    """
    w = coadjoint_table(mla)
    gamma = 0.5 * (mla.c - w - w.transpose(1, 0, 2))

    return ConnectionCoefficients(mla.n, gamma)


def _check_dimension(mla: MetricLieAlgebra, n: int, what: str):
    if n != mla.n:
        raise tlgeom.algebra.DimensionError(f"{what} dimension {n} does not match algebra dimension {mla.n}.")


def riemann(mla: MetricLieAlgebra, conn: ConnectionCoefficients) -> CurvatureTensor:
    """Riemann curvature of ``conn`` on basis triples."""
    _check_dimension(mla, conn.n, "Connection")
    gamma = conn.gamma

    # nabla_i (nabla_j e_k) = sum_m gamma[j, k, m] nabla_i e_m
    first = np.einsum("jkm,iml->ijkl", gamma, gamma)
    second = np.einsum("ikm,jml->ijkl", gamma, gamma)
    third = np.einsum("ijm,mkl->ijkl", mla.c, gamma)

    return CurvatureTensor(mla.n, first - second - third)


def lowered(mla: MetricLieAlgebra, curv: CurvatureTensor) -> np.ndarray:
    """Return ``R_ijkl = g(R(e_i, e_j)e_k, e_l)``."""
    _check_dimension(mla, curv.n, "Curvature")

    return np.einsum("ijkm,ml->ijkl", curv.r, mla.g)


def curvature_of(mla: MetricLieAlgebra) -> Tuple[ConnectionCoefficients, CurvatureTensor]:
    """Shortcut: Levi-Civita connection and its curvature."""
    conn = levi_civita(mla)

    return conn, riemann(mla, conn)


def sectional(mla: MetricLieAlgebra, curv: CurvatureTensor, x: npt.ArrayLike, y: npt.ArrayLike) -> float:
    """Sectional curvature of the plane spanned by ``x`` and ``y``.

    Raises:
        DegeneracyError: Gram determinant below ``1e-12 * g(x, x) g(y, y)``.
    """
    x = tlgeom.algebra._check_vector(mla, x)
    y = tlgeom.algebra._check_vector(mla, y)
    gxx = mla.metric.inner(x, x)
    gyy = mla.metric.inner(y, y)
    gxy = mla.metric.inner(x, y)
    gram = gxx * gyy - gxy**2
    if (gxx <= 0.0) or (gyy <= 0.0) or (gram <= PLANE_DEGENERACY_THRESHOLD * gxx * gyy):
        raise tlgeom.algebra.DegeneracyError(f"Degenerate plane: Gram determinant {gram:.3e} (|x|^2={gxx}, |y|^2={gyy}).")

    return mla.metric.inner(curv.apply(x, y, y), x) / gram


def sectional_table(mla: MetricLieAlgebra, curv: CurvatureTensor) -> List[Tuple[int, int, float]]:
    """Sectional curvature on every basis plane ``(e_i, e_j)``, ``i < j``."""
    table = []
    for i in range(mla.n):
        for j in range(i + 1, mla.n):
            table.append((i, j, sectional(mla, curv, mla.basis_vector(i), mla.basis_vector(j))))

    return table


def ricci(
    mla: MetricLieAlgebra,
    curv: CurvatureTensor,
    x: npt.ArrayLike,
    y: npt.ArrayLike,
    basis: Optional[Sequence[Vector]] = None,
) -> float:
    """Ricci curvature ``Ric(x, y)`` as a trace over an orthonormal basis.

    Args:
        basis: ``g``-orthonormal basis to trace over. By default the index-order
            :func:`tlgeom.algebra.gram_schmidt()` basis.
    """
    x = tlgeom.algebra._check_vector(mla, x)
    y = tlgeom.algebra._check_vector(mla, y)
    if basis is None:
        basis = tlgeom.algebra.gram_schmidt(mla)

    return float(sum(mla.metric.inner(curv.apply(u, x, y), u) for u in basis))


def ricci_tensor(mla: MetricLieAlgebra, curv: CurvatureTensor) -> np.ndarray:
    """Ricci matrix ``Ric(e_a, e_b)`` via metric-inverse contraction
    ``sum_ij (g^-1)_ij g(R(e_i, e_a)e_b, e_j)``.
    """
    g_inv = tlgeom.algebra.solve_spd(mla.metric, np.eye(mla.n))

    return np.einsum("ij,iabj->ab", g_inv, lowered(mla, curv))


def ricci_direction(mla: MetricLieAlgebra, curv: CurvatureTensor, x: npt.ArrayLike) -> float:
    """Ricci curvature in direction ``x``: ``Ric(x, x)``."""
    x = tlgeom.algebra._check_vector(mla, x)
    if mla.metric.inner(x, x) <= 0.0:
        raise tlgeom.algebra.DegeneracyError("Ricci direction requires a nonzero vector.")

    return ricci(mla, curv, x, x)


def random_plane(n: int, seed: int, *stream: int) -> Tuple[Vector, Vector]:
    """Return two standard normal vectors drawn from ``(seed, *stream)``.

    Every draw is a pure function of its entropy tuple, independent of the
    order in which planes are evaluated.
    """
    rng = np.random.default_rng([seed, *stream])

    return rng.standard_normal(n), rng.standard_normal(n)


def _sampled_curvatures(mla: MetricLieAlgebra, curv: CurvatureTensor, trials: int, seed: int) -> List[float]:
    values = [value for _, _, value in sectional_table(mla, curv)]
    for trial in range(trials):
        x, y = random_plane(mla.n, seed, trial)
        try:
            values.append(sectional(mla, curv, x, y))
        except tlgeom.algebra.DegeneracyError:  # pragma: no cover
            tlgeom.log.warning(f"Skipping degenerate random plane #{trial} (seed {seed}).")

    return values


def constant_sectional_check(
    mla: MetricLieAlgebra,
    curv: CurvatureTensor,
    trials: int = DEFAULT_CONSTANT_TRIALS,
    seed: int = 0,
    tol: float = DEFAULT_TOL_CMP,
) -> ConstantCurvature:
    """Sample sectional curvature on all basis planes plus ``trials`` seeded
    random planes.

    Returns:
        ``(is_constant, mean value, max absolute deviation from the mean)``,
        where ``is_constant = max_deviation <= tol``.
    """
    if mla.n < 2:
        raise tlgeom.algebra.DimensionError("Sectional curvature requires dimension >= 2.")
    if trials < 1:
        raise ValueError(f"Number of random trials must be >= 1, got {trials}.")

    values = np.array(_sampled_curvatures(mla, curv, trials, seed))
    value = float(np.mean(values))
    max_deviation = float(np.max(np.abs(values - value)))

    return ConstantCurvature(max_deviation <= tol, value, max_deviation)


def sign_profile(
    mla: MetricLieAlgebra,
    curv: CurvatureTensor,
    trials: int = DEFAULT_CONSTANT_TRIALS,
    seed: int = 0,
    tol: float = DEFAULT_TOL_CMP,
) -> SignProfile:
    """Count positive, negative and zero (``|K| <= tol``) sectional curvatures
    over basis planes and ``trials`` seeded random planes.
    """
    if mla.n < 2:
        raise tlgeom.algebra.DimensionError("Sectional curvature requires dimension >= 2.")

    values = _sampled_curvatures(mla, curv, trials, seed)
    positive = sum(1 for value in values if value > tol)
    negative = sum(1 for value in values if value < -tol)

    return SignProfile(positive, negative, len(values) - positive - negative)


def check_connection(mla: MetricLieAlgebra, conn: ConnectionCoefficients, tol: float = DEFAULT_TOL_CMP) -> ValidationResult:
    """Check torsion-freeness and metric compatibility of ``conn``."""
    _check_dimension(mla, conn.n, "Connection")
    violations = []

    torsion = conn.gamma - conn.gamma.transpose(1, 0, 2) - mla.c
    for i, j, k in zip(*np.nonzero(np.abs(torsion) > tol)):
        violations.append(Violation("torsion", (int(i), int(j), int(k)), float(abs(torsion[i, j, k]))))

    # g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k)
    low = np.einsum("ijm,mk->ijk", conn.gamma, mla.g)
    compat = low + low.transpose(0, 2, 1)
    for i, j, k in zip(*np.nonzero(np.abs(compat) > tol)):
        violations.append(Violation("metric compatibility", (int(i), int(j), int(k)), float(abs(compat[i, j, k]))))

    return ValidationResult(tuple(violations))


def check_curvature(mla: MetricLieAlgebra, curv: CurvatureTensor, tol: float = DEFAULT_TOL_CMP) -> ValidationResult:
    """Check skew symmetries, pair symmetry and the first Bianchi identity."""
    violations = []
    r = curv.r
    low = lowered(mla, curv)

    residuals = {
        "skew (R(x,y) = -R(y,x))": r + r.transpose(1, 0, 2, 3),
        "skew (R_ijkl = -R_ijlk)": low + low.transpose(0, 1, 3, 2),
        "pair symmetry": low - low.transpose(2, 3, 0, 1),
        "first Bianchi": r + r.transpose(1, 2, 0, 3) + r.transpose(2, 0, 1, 3),
    }
    for identity, residual in residuals.items():
        for idx in zip(*np.nonzero(np.abs(residual) > tol)):
            violations.append(Violation(identity, tuple(int(i) for i in idx), float(abs(residual[idx]))))

    return ValidationResult(tuple(violations))
