import numpy as np
import pytest

import qgidem as qg
from qgidem.states import (
    SolveConfig,
    State,
    convolve,
    epsilon_state,
    haar_state,
    idempotency_defect,
    is_idempotent,
    is_state,
    left_slice,
    random_state,
    recover_slice,
    right_slice,
    solve_idempotents,
    subgroup_state_fn,
    subgroup_state_ga,
)

from helpers import (
    PROPERTY_GROUPS,
    SOLVER_CASES,
    algebra,
    group,
    hausdorff,
    oracle_states,
    solved,
)


def random_functional(g, rng):
    return rng.standard_normal(g.dim) + 1j * rng.standard_normal(g.dim)


def test_counit_is_convolution_identity():
    g = algebra("ga", "S3")
    rng = np.random.default_rng(0)
    for _ in range(5):
        w = random_functional(g, rng)
        assert np.abs(convolve(g, g.counit, w) - w).max() < 1e-12
        assert np.abs(convolve(g, w, g.counit) - w).max() < 1e-12


def test_haar_absorbs_states():
    g = algebra("ga", "S3")
    rng = np.random.default_rng(1)
    for _ in range(5):
        w = random_state(g, rng).coeffs
        assert np.abs(convolve(g, g.haar, w) - g.haar).max() < 1e-12
        assert np.abs(convolve(g, w, g.haar) - g.haar).max() < 1e-12


def test_convolution_squares_grouplike_coefficients():
    g = algebra("ga", "Z2")
    w = np.array([1.0, 0.25])
    assert np.allclose(convolve(g, w, w), w**2)


def test_convolution_associative_on_random_states():
    for kind, name in [("fn", "S3"), ("ga", "D4")]:
        g = algebra(kind, name)
        rng = np.random.default_rng(2)
        for _ in range(4):
            a, b, c = (random_state(g, rng).coeffs for _ in range(3))
            lhs = convolve(g, convolve(g, a, b), c)
            rhs = convolve(g, a, convolve(g, b, c))
            assert np.abs(lhs - rhs).max() < 1e-12


def test_slice_operators():
    g = algebra("fn", "S3")
    assert np.allclose(left_slice(g, g.counit), np.eye(6))
    assert np.allclose(right_slice(g, g.counit), np.eye(6))
    # left invariance makes L_h the rank-one map a -> h(a) 1
    assert np.allclose(left_slice(g, g.haar), np.outer(g.unit, g.haar))
    ga = algebra("ga", "S3")
    rng = np.random.default_rng(3)
    w = random_functional(ga, rng)
    assert np.allclose(left_slice(ga, w), np.diag(w))


def test_slice_composition_contract():
    # L_mu L_nu = L_{nu * mu} and R_mu R_nu = R_{mu * nu}
    for kind, name in [("fn", "S3"), ("ga", "Q8")]:
        g = algebra(kind, name)
        rng = np.random.default_rng(4)
        mu, nu = random_functional(g, rng), random_functional(g, rng)
        assert np.abs(
            left_slice(g, mu) @ left_slice(g, nu) - left_slice(g, convolve(g, nu, mu))
        ).max() < 1e-12
        assert np.abs(
            right_slice(g, mu) @ right_slice(g, nu) - right_slice(g, convolve(g, mu, nu))
        ).max() < 1e-12


def test_slice_map_injective():
    g = algebra("fn", "D4")
    flat = g.comult.reshape(g.dim, g.dim * g.dim).T  # column j: matrix of L_{f_j}
    assert np.linalg.matrix_rank(flat) == g.dim


def test_is_state_and_idempotency():
    g = algebra("fn", "Z2")
    assert is_idempotent(g, g.counit)
    assert is_idempotent(g, g.haar)
    w = np.array([0.7, 0.3])
    assert is_state(g, w)
    assert not is_idempotent(g, w)
    assert abs(convolve(g, w, w)[0] - 0.58) < 1e-15
    assert not is_state(g, np.array([1.5, -0.5]))
    assert not is_state(g, np.array([0.5, 0.3]))  # not normalized


def test_shift_helpers():
    g = algebra("ga", "S3")
    rng = np.random.default_rng(8)
    st = random_state(g, rng)
    b = random_functional(g, rng)
    a = random_functional(g, rng)
    assert np.isclose(st.right_shift(b).value(a), st.value(g.multiply(a, b)))
    assert np.isclose(st.left_shift(b).value(a), st.value(g.multiply(b, a)))


def test_subgroup_states_fn():
    ct = group("S3")
    g = algebra("fn", "S3")
    assert np.allclose(subgroup_state_fn(g, ct, [ct.identity]).coeffs, g.counit)
    assert np.allclose(subgroup_state_fn(g, ct, range(6)).coeffs, g.haar)
    a3 = [s for s in qg.all_subgroups(ct) if len(s) == 3][0]
    st = subgroup_state_fn(g, ct, a3)
    assert is_idempotent(g, st.coeffs)
    assert np.isclose(st.coeffs[list(a3)].sum().real, 1.0)
    three_cycle = next(x for x in range(6) if ct.inv(x) not in (x, ct.identity))
    with pytest.raises(ValueError, match="not a subgroup"):
        subgroup_state_fn(g, ct, [ct.identity, three_cycle])


def test_subgroup_states_ga():
    ct = group("S3")
    g = algebra("ga", "S3")
    assert np.allclose(subgroup_state_ga(g, ct, [ct.identity]).coeffs, g.haar)
    assert np.allclose(subgroup_state_ga(g, ct, range(6)).coeffs, g.counit)
    transpositions = [x for x in range(6) if x != ct.identity and ct.inv(x) == x]
    st = subgroup_state_ga(g, ct, [ct.identity, transpositions[0]])
    assert is_idempotent(g, st.coeffs)
    with pytest.raises(ValueError, match="not a subgroup"):
        subgroup_state_ga(g, ct, [ct.identity] + transpositions[:2])


def test_non_subgroup_indicator_fails_positivity():
    ct = group("S3")
    g = algebra("ga", "S3")
    transpositions = [x for x in range(6) if x != ct.identity and ct.inv(x) == x]
    w = np.zeros(6, dtype=complex)
    w[[ct.identity] + transpositions[:2]] = 1.0
    w /= np.dot(w, g.unit)  # normalize at the unit; positivity still fails
    assert not is_state(g, w)


@pytest.mark.parametrize("kind,name,count", SOLVER_CASES)
def test_solver_matches_subgroup_oracle(kind, name, count):
    found = solved(kind, name)
    oracle = oracle_states(kind, name)
    assert len(found) == count == len(oracle)
    assert hausdorff(list(found), list(oracle)) <= 1e-7


@pytest.mark.parametrize("seed", [1, 42])
@pytest.mark.parametrize("kind,name,count", SOLVER_CASES)
def test_solver_oracle_match_is_seed_robust(kind, name, count, seed):
    found = solved(kind, name, seed=seed)
    assert len(found) == count
    assert hausdorff(list(found), list(oracle_states(kind, name))) <= 1e-7


IDEMPOTENT_COUNTS = {"Z2": 2, "Z3": 2, "Z4": 3, "Z2xZ2": 5, "S3": 6, "D4": 10, "Q8": 6}


@pytest.mark.parametrize("name", PROPERTY_GROUPS)
@pytest.mark.parametrize("kind", ["fn", "ga"])
def test_solver_oracle_equivalence_property(kind, name):
    found = solved(kind, name)
    oracle = oracle_states(kind, name)
    assert len(found) == len(oracle) == IDEMPOTENT_COUNTS[name]
    assert hausdorff(list(found), list(oracle)) <= 1e-7


def test_solver_outputs_are_idempotent_states():
    for kind, name, _ in SOLVER_CASES:
        g = algebra(kind, name)
        for st in solved(kind, name):
            assert is_idempotent(g, st.coeffs, 1e-9)


def test_solver_always_contains_counit_and_haar():
    for kind, name in [("fn", "Z5"), ("ga", "Z6")]:
        g = algebra(kind, name)
        found = solved(kind, name)
        assert min(np.abs(st.coeffs - g.counit).max() for st in found) < 1e-9
        assert min(np.abs(st.coeffs - g.haar).max() for st in found) < 1e-9


def test_solver_deterministic_given_seed():
    g = algebra("fn", "S3")
    cfg = SolveConfig(starts=200, seed=11)
    a = solve_idempotents(g, cfg)
    b = solve_idempotents(g, cfg)
    assert len(a) == len(b)
    for x, y in zip(a, b):
        assert np.array_equal(x.coeffs, y.coeffs)


def test_solver_dim_one():
    g = algebra("fn", "Z1")
    found = solve_idempotents(g)
    assert len(found) == 1
    assert np.allclose(found[0].coeffs, [1.0])


def test_solve_config_validation():
    with pytest.raises(ValueError):
        SolveConfig(starts=0)
    with pytest.raises(ValueError):
        SolveConfig(newton_tol=-1.0)


def test_convolve_requires_same_parent():
    a = epsilon_state(algebra("fn", "Z2"))
    b = epsilon_state(algebra("fn", "Z3"))
    with pytest.raises(ValueError, match="same parent"):
        a.convolve(b)


def test_cesaro_walk_fixed_points():
    g = algebra("fn", "Z4")
    for st in (epsilon_state(g), haar_state(g)):
        walk = qg.cesaro_walk(g, st, 20)
        assert all(np.abs(nu.coeffs - st.coeffs).max() < 1e-12 for nu in walk)


def test_cesaro_walk_converges_to_haar():
    g = algebra("fn", "Z4")
    mu = np.array([0.4, 0.3, 0.2, 0.1])
    walk = qg.cesaro_walk(g, mu, 4096)
    dist = [np.abs(nu.coeffs - g.haar).max() for nu in walk]
    assert dist[-1] < 3e-4
    # O(1/k) decay: doubling k roughly halves the distance
    assert dist[2047] < 2.6 * dist[4095]
    assert all(is_state(g, nu.coeffs, 1e-9) for nu in walk[:64])


def test_cesaro_walk_against_eigendecomposition_oracle():
    # step uniformly among staying and advancing one generator step
    g = algebra("fn", "Z4")
    mu = np.array([0.5, 0.5, 0.0, 0.0])
    walk = qg.cesaro_walk(g, mu, 512)
    # independent closed form: powers of the transition operator by
    # diagonalization, averaged
    step = np.einsum("ijk,k->ij", g.comult, mu)
    evals, evecs = np.linalg.eig(step)
    coords = np.linalg.solve(evecs, mu)
    for k in (1, 2, 5, 33, 512):
        geom = np.array(
            [
                sum(lam**j for j in range(k)) / k  # power j-1 for mu^(*j)
                for lam in evals
            ]
        )
        expected = evecs @ (geom * coords)
        assert np.abs(walk[k - 1].coeffs - expected).max() < 1e-12
    # spectral gap |1 + i|/2 drives O(1/k) convergence to the Haar state
    assert np.abs(walk[-1].coeffs - g.haar).max() < 10.0 / 512


def test_recover_slice():
    g = algebra("fn", "S3")
    mu = recover_slice(g, np.eye(6))
    assert mu is not None and np.allclose(mu.coeffs, g.counit)
    mu = recover_slice(g, left_slice(g, g.haar))
    assert mu is not None and np.allclose(mu.coeffs, g.haar)


def test_recover_slice_central_vs_noncentral():
    # centrality in the measure algebra decides whether a right slice is
    # also a left slice; on C(S3) only central (class) measures qualify
    ct = group("S3")
    g = algebra("fn", "S3")
    a3 = [s for s in qg.all_subgroups(ct) if len(s) == 3][0]
    central = subgroup_state_fn(g, ct, a3)  # A3 is a union of classes
    rec = recover_slice(g, right_slice(g, central.coeffs))
    assert rec is not None
    assert np.abs(rec.coeffs - central.coeffs).max() < 1e-10
    # a point mass off the center is not a class measure: rejected
    transposition = next(x for x in range(6) if x != ct.identity and ct.inv(x) == x)
    point = np.zeros(6)
    point[transposition] = 1.0
    assert recover_slice(g, right_slice(g, point)) is None
    # on a group algebra the coproduct is symmetric, every slice is diagonal,
    # and recovery always succeeds
    ga = algebra("ga", "S3")
    st = subgroup_state_ga(ga, ct, [s for s in qg.all_subgroups(ct) if len(s) == 2][0])
    rec = recover_slice(ga, right_slice(ga, st.coeffs))
    assert rec is not None and np.abs(rec.coeffs - st.coeffs).max() < 1e-12


def test_idempotency_defect_scale():
    g = algebra("fn", "Z4")
    w = np.array([0.4, 0.3, 0.2, 0.1])
    assert idempotency_defect(g, w) > 0.01
    assert idempotency_defect(g, g.haar) < 1e-15


def test_state_sort_key_is_canonical():
    g = algebra("fn", "Z2")
    a = State(g, np.array([0.25, 0.75]))
    b = State(g, np.array([0.75, 0.25]))
    assert sorted([b, a], key=State.sort_key) == sorted([a, b], key=State.sort_key)
