import numpy as np
import pytest

import tlgeom
from tlgeom import algebra, families

HEISENBERG_F = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _heisenberg() -> families.OneDimCommutatorSpec:
    return families.OneDimCommutatorSpec(2, np.zeros(2), HEISENBERG_F)


def _samples(cfs: families.ClosedFormSet, formula_id: str):
    return {sample.argument_desc: sample for sample in cfs.entries[formula_id]}


@pytest.mark.parametrize(
    "n,lam,u_metric",
    [
        (0, 1.0, None),
        (2, 0.0, None),
        (2, -1.0, None),
        (2, float("nan"), None),
        (2, 1.0, np.eye(3)),
        (2, 1.0, np.array([[1.0, 2.0], [2.0, 1.0]])),
    ],
)
def test_special_spec_rejected(n, lam, u_metric):
    with pytest.raises(families.SpecError):
        families.SpecialGroupSpec(n, lam, u_metric)


def test_special_spec_defaults():
    spec = families.SpecialGroupSpec(3, 2)
    assert spec.lam == 2.0
    np.testing.assert_array_equal(spec.u_metric, np.eye(3))
    assert spec.describe() == {"family": "special", "n": 3, "lambda": 2.0, "u_metric": np.eye(3).tolist()}


def test_one_dim_commutator_spec_rejected():
    with pytest.raises(families.SpecError):
        families.OneDimCommutatorSpec(2, np.zeros(2), np.zeros((2, 2)))
    with pytest.raises(families.SpecError):
        families.OneDimCommutatorSpec(2, np.zeros(2), np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(families.SpecError):
        families.OneDimCommutatorSpec(2, np.zeros(3), HEISENBERG_F)


def test_closure_violation_names_triple():
    f = np.zeros((3, 3))
    f[1, 2], f[2, 1] = 1.0, -1.0

    with pytest.raises(families.SpecError) as err:
        families.OneDimCommutatorSpec(3, np.array([1.0, 0.0, 0.0]), f)
    assert err.value.triples == ((0, 1, 2),)
    assert "(0, 1, 2)" in str(err.value)


def test_closure_residuals_mixed():
    spec = tlgeom.harness.fixtures()["g2_mixed"]
    assert families.closure_residuals(spec.a, spec.f) == [((0, 1, 2), 0.0)]


def test_build_special():
    mla = families.build_special(families.SpecialGroupSpec(1, 1.0))
    assert mla.labels == ("u", "b")
    np.testing.assert_array_equal(algebra.bracket(mla, [0, 1], [1, 0]), [1, 0])

    mla = families.build_special(families.SpecialGroupSpec(2, 1.0, np.diag([1.0, 4.0])))
    assert mla.labels == ("u1", "u2", "b")
    np.testing.assert_array_equal(mla.g, np.diag([1.0, 4.0, 1.0]))
    assert not np.any(algebra.jacobi_residuals(mla.sc))
    assert str(mla.provenance) == "special(n=2, lambda=1.0)"


def test_build_one_dim_commutator():
    mla = families.build_one_dim_commutator(_heisenberg())
    assert mla.labels == ("u1", "u2", "e")
    expected = np.zeros((3, 3, 3))
    expected[0, 1, 2], expected[1, 0, 2] = 1.0, -1.0
    np.testing.assert_array_equal(mla.c, expected)

    mla = families.build_one_dim_commutator(tlgeom.harness.fixtures()["g2_affine"])
    np.testing.assert_array_equal(algebra.bracket(mla, [1, 0, 0], [0, 0, 1]), [0, 0, 1])
    np.testing.assert_array_equal(algebra.bracket(mla, [0, 1, 0], [0, 0, 1]), [0, 0, 0])
    np.testing.assert_array_equal(algebra.bracket(mla, [1, 0, 0], [0, 1, 0]), [0, 0, 0])
    assert algebra.validate(mla).ok


def test_random_special():
    spec = families.random_special(3, 42)
    assert 0.25 <= spec.lam <= 4.0
    np.testing.assert_array_equal(spec.u_metric, spec.u_metric.T)
    again = families.random_special(3, 42)
    assert again.lam == spec.lam
    np.testing.assert_array_equal(again.u_metric, spec.u_metric)


def test_random_one_dim_commutator_valid():
    nilpotent = 0
    for seed in range(500):
        n = 1 + seed % 4
        spec = families.random_one_dim_commutator(n, seed)
        assert np.any(spec.a) or np.any(spec.f)
        assert algebra.validate(families.build_one_dim_commutator(spec)).ok
        if n == 3 and not np.any(spec.a):
            nilpotent += 1
        if n == 3 and np.any(spec.a):
            assert max(abs(r) for _, r in families.closure_residuals(spec.a, spec.f)) <= 1e-14
    assert nilpotent > 0


def test_random_one_dim_commutator_deterministic():
    first = families.random_one_dim_commutator(4, 9)
    second = families.random_one_dim_commutator(4, 9)
    np.testing.assert_array_equal(first.a, second.a)
    np.testing.assert_array_equal(first.f, second.f)


def test_special_closed_forms_values():
    cfs = families.special_closed_forms(families.SpecialGroupSpec(2, 1.0))
    assert cfs.prefixes() == ["E5", "L1", "L2", "T1", "E12"]

    # nabla~_{u1^v} b^v = -1/2 u1^c
    expected = np.zeros(6)
    expected[0] = -0.5
    np.testing.assert_array_equal(cfs.entries["L1.connection"].values[(3, 5)], expected)

    # nabla_{u1} u1 = b / lambda
    np.testing.assert_array_equal(cfs.entries["E5.connection"].values[(0, 0)], [0.0, 0.0, 1.0])

    ricci = _samples(cfs, "E12.Ric_xc_yc")
    assert ricci["Ric(u1^c, u1^c)"].claimed == pytest.approx(-4.5)
    assert ricci["Ric(u1^c, u1^c)"].required
    assert _samples(cfs, "E12.Ric_xv_yv")["Ric(u1^v, u1^v)"].claimed == pytest.approx(-3.5)

    # the published factor-4 entry: R~(x^c, y^v)z^v = (g(x, z)y^c - 4 g(y, z)x^c) / (4 lambda)
    np.testing.assert_allclose(cfs.entries["L2.R_xc_yv_zv"].values[(0, 4, 4)], [-1.0, 0, 0, 0, 0, 0])


def test_special_closed_forms_scaled():
    cfs = families.special_closed_forms(tlgeom.harness.fixtures()["special_scaled"])

    samples = _samples(cfs, "T1.K_xv_bv")
    assert samples["K(gs(u1)^v, b^v)"].claimed == 0.125
    # lambda != 1: the Ricci formula is extrapolated, report-only
    assert not any(sample.required for sample in cfs.entries["E12.Ric_xc_yc"])

    general = [sample for sample in cfs.entries["T1.K_xc_yc"] if not sample.required]
    assert len(general) == families.SAMPLE_COUNT


@pytest.mark.parametrize(
    "u_metric,required",
    [
        (None, True),
        (np.array([[2.0, 0.0], [0.0, 1.0]]), False),
        (np.array([[1.0, 0.5], [0.5, 1.0]]), False),
    ],
)
def test_special_ricci_gating_needs_identity_u_metric(u_metric, required):
    cfs = families.special_closed_forms(families.SpecialGroupSpec(2, 1.0, u_metric), sample_count=2)

    for formula_id in ("E12.Ric_xc_yc", "E12.Ric_xv_yv"):
        assert cfs.entries[formula_id]
        assert all(sample.required == required for sample in cfs.entries[formula_id])


def test_g2_closed_forms_heisenberg():
    cfs = families.g2_closed_forms(_heisenberg())
    assert cfs.prefixes() == ["E16", "L3", "L4", "L5", "E20", "E21"]

    assert _samples(cfs, "L3.K_xy")["K(u1, u2)"].claimed == pytest.approx(-0.75)
    assert _samples(cfs, "L3.K_xe")["K(u1, e)"].claimed == pytest.approx(0.25)
    assert _samples(cfs, "E20.K_xc_ec")["K(u1^c, e^c)"].claimed == pytest.approx(-0.25)
    assert cfs.entries["E21.r_ev"][0].claimed == pytest.approx(1.0)

    # nabla~_{e^c} e^v = a^v / 2 = 0
    assert not np.any(cfs.entries["L4.connection"].values[(2, 5)])


def test_g2_closed_forms_one_dimensional_gamma():
    cfs = families.g2_closed_forms(families.OneDimCommutatorSpec(1, np.array([2.0]), np.zeros((1, 1))))
    assert "L3.K_xy" not in cfs.entries
    assert "E20.K_xc_yv" not in cfs.entries
    assert cfs.prefixes() == ["E16", "L3", "L4", "L5", "E20", "E21"]


def test_closed_forms_deterministic():
    spec = families.random_special(2, 4)
    first = families.special_closed_forms(spec, seed=3)
    second = families.special_closed_forms(spec, seed=3)
    for (id1, s1), (id2, s2) in zip(families.iter_samples(first), families.iter_samples(second)):
        assert id1 == id2
        assert s1.claimed == s2.claimed
        for a1, a2 in zip(s1.args, s2.args):
            np.testing.assert_array_equal(a1, a2)


def test_samples_depend_on_seed():
    spec = families.random_one_dim_commutator(3, 0)
    first = families.g2_closed_forms(spec, seed=0).entries["L3.K_xe"][-1]
    second = families.g2_closed_forms(spec, seed=1).entries["L3.K_xe"][-1]
    assert not np.array_equal(first.args[0], second.args[0])


def test_closed_form_set_registry():
    with pytest.raises(ValueError):
        families.ClosedFormSet(families.SPECIAL, {"E16.connection": ()})
    with pytest.raises(ValueError):
        families.ClosedFormSet(families.SPECIAL, {"X1.anything": ()})
