import numpy as np
import pytest

import qgidem as qg
from qgidem.core import (
    QuantumGroupError,
    StructuralError,
    antipode_slice_defect,
    coproduct_defect,
    intertwiner_defect,
    multiplicative_unitary,
    pentagon_defect,
    unitarity_defect,
)

from helpers import algebra, basis_vector, gns_and_unitary, group


SMALL_GROUPS = ["Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "S3", "D4", "Q8"]


@pytest.mark.parametrize("name", SMALL_GROUPS)
@pytest.mark.parametrize("kind", ["fn", "ga"])
def test_constructors_validate(kind, name):
    g = algebra(kind, name)
    report = qg.validate(g, tol=1e-12)
    assert report.passed, str(report)
    assert report.cancellation_ranks == (g.dim**2, g.dim**2)


def test_every_group_of_order_up_to_eight():
    # together with the registry this covers all groups of order <= 8 up
    # to isomorphism (Z1..Z8, Z2xZ2, Z2xZ4, Z2xZ2xZ2, S3, D4, Q8)
    z2 = qg.cyclic_group(2)
    extras = [
        qg.direct_product(z2, qg.cyclic_group(4)),
        qg.direct_product(z2, qg.direct_product(z2, z2)),
    ]
    for ct in extras:
        for ctor in (qg.function_algebra, qg.group_algebra):
            report = qg.validate(ctor(ct), tol=1e-12)
            assert report.passed, (ct.name, ctor.__name__, report.failures)


def test_cancellation_ranks_s3():
    report = qg.validate(algebra("ga", "S3"))
    assert report.cancellation_ranks == (36, 36)


def test_invalid_haar_fails_validation():
    base = algebra("ga", "Z2")
    bad = qg.FiniteQuantumGroup(
        dim=2, mult=base.mult, unit=base.unit, star=base.star,
        comult=base.comult, counit=base.counit, antipode=base.antipode,
        haar=base.counit,  # counit is not invariant
    )
    report = qg.validate(bad)
    assert not report.passed
    assert report.residuals["haar_left_invariant"] > 0.4
    assert "haar_left_invariant" in report.failures


def test_dimension_mismatch_is_structural_error():
    base = algebra("fn", "Z2")
    with pytest.raises(StructuralError):
        qg.FiniteQuantumGroup(
            dim=3, mult=base.mult, unit=base.unit, star=base.star,
            comult=base.comult, counit=base.counit, antipode=base.antipode,
            haar=base.haar,
        )
    with pytest.raises(StructuralError):
        qg.FiniteQuantumGroup(
            dim=0, mult=np.zeros((0, 0, 0)), unit=np.zeros(0), star=np.zeros((0, 0)),
            comult=np.zeros((0, 0, 0)), counit=np.zeros(0),
            antipode=np.zeros((0, 0)), haar=np.zeros(0),
        )


def test_trivial_quantum_group():
    g = algebra("fn", "Z1")
    assert g.dim == 1
    assert qg.validate(g, tol=1e-14).passed
    gd = qg.gns(g)
    assert np.allclose(gd.gram, [[1.0]])
    assert np.allclose(multiplicative_unitary(g, gd).v, [[1.0]])


def test_function_algebra_structure():
    g = algebra("fn", "Z2")
    # Delta(delta_g) = delta_e (x) delta_g + delta_g (x) delta_e
    assert np.allclose(g.comultiply(basis_vector(2, 1)), [[0, 1], [1, 0]])
    assert np.allclose(g.comultiply(basis_vector(2, 0)), [[1, 0], [0, 1]])
    s3 = algebra("fn", "S3")
    assert np.allclose(s3.haar, np.full(6, 1 / 6))
    assert np.allclose(s3.counit @ s3.unit, 1.0)


def test_group_algebra_structure():
    g = algebra("ga", "Z2")
    assert np.allclose(g.comultiply(basis_vector(2, 1)), [[0, 0], [0, 1]])
    assert g.haar_value(basis_vector(2, 1)) == 0
    s3 = algebra("ga", "S3")
    # noncommutative algebra, cocommutative coproduct
    assert np.abs(s3.mult - s3.mult.transpose(1, 0, 2)).max() > 0.5
    assert np.abs(s3.comult - s3.comult.transpose(0, 2, 1)).max() < 1e-15
    assert qg.validate(algebra("ga", "Q8")).passed


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4", "S3", "Q8"])
def test_dual_of_function_algebra_is_group_algebra(name):
    fn = algebra("fn", name)
    ga = algebra("ga", name)
    assert intertwiner_defect(qg.dual(fn), ga, np.eye(fn.dim)) < 1e-12
    assert intertwiner_defect(qg.dual(ga), fn, np.eye(fn.dim)) < 1e-12


def test_dual_z2_fourier_intertwiner():
    # the 2x2 change of basis lambda_e -> 1, lambda_g -> delta_e - delta_g
    # identifies the group algebra of Z2 with functions on its dual group
    fourier = np.array([[1.0, 1.0], [1.0, -1.0]])
    assert intertwiner_defect(algebra("ga", "Z2"), algebra("fn", "Z2"), fourier) < 1e-12
    assert (
        intertwiner_defect(qg.dual(algebra("fn", "Z2")), algebra("fn", "Z2"), fourier)
        < 1e-12
    )


@pytest.mark.parametrize("kind,name", [("fn", "Z3"), ("fn", "S3"), ("ga", "D4")])
def test_bidual_is_identity(kind, name):
    g = algebra(kind, name)
    assert intertwiner_defect(qg.dual(qg.dual(g)), g, np.eye(g.dim)) < 1e-12


def test_dual_of_cocommutative_is_commutative():
    d = qg.dual(algebra("ga", "Z2"))
    assert d.dim == 2
    assert np.abs(d.mult - d.mult.transpose(1, 0, 2)).max() < 1e-15
    assert qg.validate(d).passed


def test_dual_rejects_invalid_input():
    base = algebra("ga", "Z2")
    bad = qg.FiniteQuantumGroup(
        dim=2, mult=base.mult, unit=base.unit, star=base.star,
        comult=base.comult, counit=base.counit, antipode=base.antipode,
        haar=base.counit,
    )
    with pytest.raises(QuantumGroupError, match="failing axioms"):
        qg.dual(bad)


def test_gns_grams():
    assert np.allclose(qg.gns(algebra("fn", "Z2")).gram, np.diag([0.5, 0.5]))
    assert np.allclose(qg.gns(algebra("ga", "Z2")).gram, np.eye(2))


def test_gns_representation_properties():
    g = algebra("fn", "S3")
    gd = qg.gns(g)
    assert np.allclose(gd.onb.conj().T @ gd.gram @ gd.onb, np.eye(6), atol=1e-12)
    rng = np.random.default_rng(5)
    a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    b = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    # pi(a) Lambda(b) = Lambda(ab), pi(a)^H = pi(a^*), pi(1) = 1
    assert np.allclose(gd.rep(a) @ gd.vector(b), gd.vector(g.multiply(a, b)))
    assert np.allclose(gd.rep(a).conj().T, gd.rep(g.star_vec(a)))
    assert np.allclose(gd.rep(g.unit), np.eye(6))
    lifted, residual = gd.lift(gd.rep(a))
    assert residual < 1e-10 and np.allclose(lifted, a)


def test_gns_requires_faithful_haar():
    base = algebra("fn", "Z2")
    bad = qg.FiniteQuantumGroup(
        dim=2, mult=base.mult, unit=base.unit, star=base.star,
        comult=base.comult, counit=base.counit, antipode=base.antipode,
        haar=np.array([1.0, 0.0]),
    )
    with pytest.raises(QuantumGroupError, match="not faithful"):
        qg.gns(bad)


def test_multiplicative_unitary_group_algebra_z2():
    _, mu = gns_and_unitary("ga", "Z2")
    # V(Lambda(x) (x) Lambda(y)) = Lambda(x) (x) Lambda(xy): controlled shift
    expected = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float
    )
    assert np.allclose(mu.v, expected)


@pytest.mark.parametrize("kind,name", [("fn", "Z2"), ("fn", "S3"), ("ga", "S3"), ("ga", "Q8")])
def test_multiplicative_unitary_invariants(kind, name):
    g = algebra(kind, name)
    gd, mu = gns_and_unitary(kind, name)
    assert unitarity_defect(mu.v) < 1e-12
    assert pentagon_defect(mu.v) < 1e-12
    assert coproduct_defect(g, gd, mu.v) < 1e-10
    slice_defect, span_rank = antipode_slice_defect(g, gd, mu)
    assert slice_defect < 1e-10
    assert span_rank == g.dim


def test_pentagon_defect_sampled_path_agrees():
    _, mu = gns_and_unitary("fn", "S3")
    dense = pentagon_defect(mu.v)
    sampled = pentagon_defect(mu.v, max_dense_dim=1, rng=np.random.default_rng(0))
    assert dense < 1e-12 and sampled < 1e-12


def test_multiplicative_unitary_flags_noninvariant_haar():
    base = algebra("fn", "Z2")
    skew = qg.FiniteQuantumGroup(
        dim=2, mult=base.mult, unit=base.unit, star=base.star,
        comult=base.comult, counit=base.counit, antipode=base.antipode,
        haar=np.array([0.7, 0.3]),
    )
    gd = qg.gns(skew)  # faithful, so the GNS space exists
    with pytest.raises(QuantumGroupError, match="right-invariance defect"):
        multiplicative_unitary(skew, gd)


def test_immutability():
    g = algebra("fn", "Z2")
    with pytest.raises(ValueError):
        g.mult[0, 0, 0] = 2.0
    ct = group("S3")
    with pytest.raises(ValueError):
        ct.table[0, 0] = 1
