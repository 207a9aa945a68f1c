import numpy as np
import pytest

import tlgeom
from tlgeom import algebra, families, geometry, lift

TOL = 1e-9


def _instances():
    for name, fixture in tlgeom.harness.fixtures().items():
        yield name, tlgeom.cli.algebra_of(fixture)
    for seed in range(50):
        n = 1 + seed % 3
        yield f"special#{seed}", families.build_special(families.random_special(n, seed))
        yield f"g2#{seed}", families.build_one_dim_commutator(families.random_one_dim_commutator(n, seed))


def test_lift_indexing():
    idx = lift.LiftIndexing(3)
    assert [idx.complete(i) for i in range(3)] == [0, 1, 2]
    assert [idx.vertical(i) for i in range(3)] == [3, 4, 5]
    assert idx.labels(("x", "y", "z")) == ("x^c", "y^c", "z^c", "x^v", "y^v", "z^v")

    with pytest.raises(IndexError):
        idx.vertical(3)
    with pytest.raises(IndexError):
        idx.complete(-1)


def test_lift_abelian():
    g = np.diag([1.0, 2.0])
    mla = algebra.MetricLieAlgebra(algebra.StructureConstants.zeros(2), algebra.InnerProduct(g))

    lifted = lift.tangent_lift(mla)
    assert lifted.n == 4
    assert not np.any(lifted.c)
    np.testing.assert_array_equal(lifted.g, np.diag([1.0, 2.0, 1.0, 2.0]))


def test_lift_hyperbolic_plane():
    mla = families.build_special(families.SpecialGroupSpec(1, 1.0))
    lifted = lift.tangent_lift(mla)

    assert lifted.labels == ("u^c", "b^c", "u^v", "b^v")
    assert str(lifted.provenance) == "tangent-lift(special(n=1, lambda=1.0))"
    u_c, b_c, u_v, b_v = range(4)
    expected = np.zeros((4, 4, 4))
    for x, y, z in ((b_c, u_c, u_c), (b_c, u_v, u_v), (b_v, u_c, u_v)):
        expected[x, y, z] = 1.0
        expected[y, x, z] = -1.0
    np.testing.assert_array_equal(lifted.c, expected)


@pytest.mark.parametrize("name", ["special_scaled", "g2_mixed", "so3"])
def test_lifted_metric_blocks(name):
    mla = tlgeom.cli.algebra_of(tlgeom.harness.fixtures()[name])
    lifted = lift.tangent_lift(mla)
    n = mla.n

    np.testing.assert_array_equal(lifted.g[:n, :n], mla.g)
    np.testing.assert_array_equal(lifted.g[n:, n:], mla.g)
    assert not np.any(lifted.g[:n, n:])
    assert not np.any(lifted.g[n:, :n])


def test_lift_validates_and_double_lift():
    for name, mla in _instances():
        lifted = lift.tangent_lift(mla)
        assert algebra.validate(lifted).ok, name
    double = lift.tangent_lift(lift.tangent_lift(families.build(tlgeom.harness.fixtures()["g2_mixed"])))
    assert double.n == 16
    assert algebra.validate(double).ok


def test_closed_form_matches_oracle():
    for name, mla in _instances():
        closed_form = lift.lifted_connection_closed_form(mla)
        oracle = geometry.levi_civita(lift.tangent_lift(mla))
        np.testing.assert_allclose(closed_form.gamma, oracle.gamma, rtol=0, atol=TOL, err_msg=name)


def test_closed_form_special_vertical_pair():
    mla = families.build_special(families.SpecialGroupSpec(2, 1.0))
    closed_form = lift.lifted_connection_closed_form(mla)
    idx = lift.LiftIndexing(mla.n)

    expected = np.zeros(6)
    expected[idx.complete(0)] = -0.5
    np.testing.assert_allclose(closed_form.gamma[idx.vertical(0), idx.vertical(2)], expected, atol=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_closed_form_one_dim_commutator_e_e(seed):
    spec = families.random_one_dim_commutator(3, seed)
    mla = families.build_one_dim_commutator(spec)
    closed_form = lift.lifted_connection_closed_form(mla)
    idx = lift.LiftIndexing(mla.n)

    expected = np.zeros(8)
    expected[:3] = spec.a
    np.testing.assert_allclose(closed_form.gamma[idx.complete(3), idx.complete(3)], expected, atol=1e-12)


def test_closed_form_abelian():
    mla = algebra.MetricLieAlgebra(algebra.StructureConstants.zeros(3), algebra.InnerProduct.identity(3))
    assert not np.any(lift.lifted_connection_closed_form(mla).gamma)
