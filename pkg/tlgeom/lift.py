"""
Tangent Lie algebra of a metric Lie algebra.

The complete lifts ``x^c`` and vertical lifts ``x^v`` of left-invariant fields
span the Lie algebra of the tangent group ``TG``, with brackets
``[x^c, y^c] = [x, y]^c``, ``[x^v, y^c] = [x, y]^v``, ``[x^v, y^v] = 0`` and the
lifted metric ``g~(x^c, y^c) = g~(x^v, y^v) = g(x, y)``, ``g~(x^c, y^v) = 0``.

Index convention: complete lifts occupy ``0 ... n-1``, vertical lifts
``n ... 2n-1``; labels are ``<base>^c`` and ``<base>^v``.
"""
import dataclasses
from typing import Tuple

import numpy as np
import scipy.linalg

import tlgeom
from tlgeom.algebra import MetricLieAlgebra, Provenance
from tlgeom.geometry import ConnectionCoefficients

COMPLETE_SUFFIX = "^c"
VERTICAL_SUFFIX = "^v"


@dataclasses.dataclass(frozen=True)
class LiftIndexing:
    """Maps base basis indices to lifted basis indices."""

    n: int

    def complete(self, idx: int) -> int:
        self._check(idx)
        return idx

    def vertical(self, idx: int) -> int:
        self._check(idx)
        return self.n + idx

    def labels(self, base_labels: Tuple[str, ...]) -> Tuple[str, ...]:
        complete = tuple(f"{label}{COMPLETE_SUFFIX}" for label in base_labels)
        vertical = tuple(f"{label}{VERTICAL_SUFFIX}" for label in base_labels)

        return complete + vertical

    def _check(self, idx: int):
        if not 0 <= idx < self.n:
            raise IndexError(f"Base index {idx} out of range 0...{self.n - 1}.")


def tangent_lift(mla: MetricLieAlgebra, tol_jacobi: float = tlgeom.algebra.DEFAULT_TOL_JACOBI) -> MetricLieAlgebra:
    """Build the ``2n``-dimensional tangent Lie algebra with the lifted metric.

    Note:
        Only ``[x^c, y^c]`` and ``[x^v, y^c]`` are written; ``[x^c, y^v]`` follows
        from antisymmetric storage. The result is validated, Jacobi included.

    Raises:
        ValidationError: lifted algebra fails :func:`tlgeom.algebra.validate()`.
    """
    n = mla.n
    idx = LiftIndexing(n)
    c = mla.c

    lifted_c = np.zeros((2 * n, 2 * n, 2 * n))
    lifted_c[:n, :n, :n] = c  # [x^c, y^c] = [x, y]^c
    lifted_c[n:, :n, n:] = c  # [x^v, y^c] = [x, y]^v
    lifted_c[:n, n:, n:] = -c.transpose(1, 0, 2)  # [x^c, y^v] = -[y^v, x^c]

    metric = tlgeom.algebra.InnerProduct(scipy.linalg.block_diag(mla.g, mla.g))
    sc = tlgeom.algebra.StructureConstants(2 * n, lifted_c)
    provenance = Provenance(tlgeom.algebra.TANGENT_LIFT, parent=mla.provenance)
    lifted = MetricLieAlgebra(sc, metric, idx.labels(mla.labels), provenance)
    tlgeom.log.debug(f"Built tangent lift of {mla.provenance}: dimension {n} -> {2 * n}")

    return tlgeom.algebra.require_valid(lifted, tol_jacobi)


def lifted_connection_closed_form(mla: MetricLieAlgebra) -> ConnectionCoefficients:
    """Levi-Civita connection of the lifted metric, assembled from the base
    connection and coadjoint operators:

    * ``nabla~_{x^c} y^c = (nabla_x y)^c``
    * ``nabla~_{x^v} y^v = (nabla_x y - 1/2 [x, y])^c``
    * ``nabla~_{x^c} y^v = (nabla_x y + 1/2 ad*_y x)^v``
    * ``nabla~_{x^v} y^c = (nabla_x y + 1/2 ad*_x y)^v``

    Returns:
        Connection on the lifted basis (complete block first).
    """
    n = mla.n
    gamma = tlgeom.geometry.levi_civita(mla).gamma
    coad = tlgeom.geometry.coadjoint_table(mla)  # coad[i, j] = ad*_{e_i} e_j

    lifted = np.zeros((2 * n, 2 * n, 2 * n))
    lifted[:n, :n, :n] = gamma
    lifted[n:, n:, :n] = gamma - 0.5 * mla.c
    lifted[:n, n:, n:] = gamma + 0.5 * coad.transpose(1, 0, 2)
    lifted[n:, :n, n:] = gamma + 0.5 * coad

    return ConnectionCoefficients(2 * n, lifted)
