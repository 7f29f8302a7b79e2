import numpy as np
import pytest

from framings.dilation import (
    OperatorMap,
    OrbitVector,
    block_gram,
    boundedness_constant,
    boundedness_table,
    build_dilation,
    check_positive_definite,
    intertwiner,
    orbit_eval,
    shifted_gram,
    verify_dilation,
)
from framings.errors import IndexOutOfRange, NotPositiveDefinite, ShapeError
from framings.semigroup import FiniteStarSemigroup, cyclic_group, subset_semigroup

TRIVIAL = FiniteStarSemigroup([[0]], [0], 0)
SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def coin_map():
    return OperatorMap(subset_semigroup(2), np.array([[[0.0]], [[0.5]], [[0.5]], [[1.0]]]))


def test_orbit_eval_examples():
    om = OperatorMap.from_matrices(TRIVIAL, [np.eye(1)])
    assert np.allclose(orbit_eval(om, 0, [1.0], 0), [1.0])
    om = OperatorMap.from_matrices(cyclic_group(2), {0: np.eye(2), 1: SWAP})
    # t s = 1 + 1 = 0, phi(0) e1 = e1
    assert np.allclose(orbit_eval(om, 1, [1.0, 0.0], 1), [1.0, 0.0])
    assert np.allclose(orbit_eval(om, 1, [1.0, 0.0], 0), [0.0, 1.0])
    with pytest.raises(IndexOutOfRange):
        orbit_eval(om, 2, [1.0, 0.0], 0)
    with pytest.raises(ShapeError):
        orbit_eval(om, 0, [1.0], 0)


def test_orbit_vector():
    om = OperatorMap.from_matrices(cyclic_group(2), {0: np.eye(2), 1: SWAP})
    x = OrbitVector({(0, 0): 1.0, (1, 1): 2.0})
    assert np.allclose(x.coordinates(om), [1, 0, 0, 2])
    assert np.allclose(x(om, 0), [3.0, 0.0])      # e1 + 2 swap(e2) = 3 e1
    with pytest.raises(IndexOutOfRange):
        OrbitVector({(0, 5): 1.0}).coordinates(om)


def test_operator_map_validation():
    with pytest.raises(ShapeError):
        OperatorMap(cyclic_group(2), np.zeros((3, 1, 1)))
    with pytest.raises(ShapeError):
        OperatorMap.from_matrices(cyclic_group(2), {0: np.eye(1)})
    with pytest.raises(ShapeError):
        OperatorMap.from_matrices(cyclic_group(2), [np.eye(1), np.eye(2)])
    with pytest.raises(ShapeError):
        block_gram(OperatorMap(TRIVIAL, np.ones((1, 1, 2))))


def test_gram_trivial_and_subset():
    om = OperatorMap.from_matrices(TRIVIAL, [np.eye(1)])
    assert np.allclose(block_gram(om), [[1.0]])
    assert check_positive_definite(om).positive_definite
    om = OperatorMap.from_matrices(subset_semigroup(1), [[[0.0]], [[1.0]]])
    G = block_gram(om)
    assert np.allclose(G, [[0, 0], [0, 1]])
    # 2x2 eigenvalues from trace and determinant
    tr, det = np.trace(G).real, np.linalg.det(G).real
    disc = np.sqrt(tr ** 2 - 4 * det)
    assert (tr - disc) / 2 == pytest.approx(0.0) and (tr + disc) / 2 == pytest.approx(1.0)
    assert check_positive_definite(om).positive_definite


def test_gram_z2_not_pd():
    om = OperatorMap.from_matrices(cyclic_group(2), [[[1.0]], [[2.0]]])
    G = block_gram(om)
    assert np.allclose(G, [[1, 2], [2, 1]])
    rep = check_positive_definite(om)
    assert not rep.positive_definite and rep.min_eigenvalue == pytest.approx(-1.0)
    with pytest.raises(NotPositiveDefinite):
        build_dilation(om)


def test_gram_entry_convention():
    rng = np.random.default_rng(1)
    phi = rng.standard_normal((2, 2, 2)) + 1j * rng.standard_normal((2, 2, 2))
    om = OperatorMap(cyclic_group(2), phi)
    G = block_gram(om)
    sg = om.sg
    for t in range(2):
        for j in range(2):
            for s in range(2):
                for i in range(2):
                    w = sg.mul[sg.star[t], s]
                    assert G[t * 2 + j, s * 2 + i] == pytest.approx(phi[w][j, i])


def test_dilation_trivial():
    om = OperatorMap.from_matrices(TRIVIAL, [np.eye(1)])
    dil = build_dilation(om)
    assert dil.rank == 1
    assert np.allclose(np.abs(dil.Phi[0]), 1) and np.allclose(np.abs(dil.T), 1)
    assert np.allclose(dil.Sop @ dil.Phi[0] @ dil.T, [[1.0]])
    assert verify_dilation(dil, om).passed


def test_dilation_subset_one():
    om = OperatorMap.from_matrices(subset_semigroup(1), [[[0.0]], [[1.0]]])
    dil = build_dilation(om)
    assert dil.rank == 1
    assert np.allclose(dil.Phi[1], [[1.0]]) and np.allclose(dil.Phi[0], [[0.0]])


def test_dilation_coin_against_explicit_model():
    om = coin_map()
    G = block_gram(om)
    assert np.allclose(G, [[0, 0, 0, 0], [0, .5, 0, .5], [0, 0, .5, .5], [0, .5, .5, 1]])
    dil = build_dilation(om)
    assert dil.rank == 2
    rep = verify_dilation(dil, om)
    assert rep.passed and rep.isometry
    assert all(c.residual <= 1e-10 for c in rep.checks.values())
    # explicit model: K = C^2, Phi({a}) = e_a e_a^*, T = (1, 1)/sqrt 2
    Phi_tb = np.array([np.zeros((2, 2)), np.diag([1.0, 0]), np.diag([0, 1.0]), np.eye(2)])
    T_tb = np.full((2, 1), 2 ** -0.5)
    X = np.concatenate([dil.Phi[s] @ dil.T for s in range(4)], axis=1)
    X_tb = np.concatenate([Phi_tb[s] @ T_tb for s in range(4)], axis=1)
    W = X_tb @ np.linalg.pinv(X)
    assert np.allclose(W.conj().T @ W, np.eye(2), atol=1e-10)
    for s in range(4):
        assert np.allclose(W @ dil.Phi[s], Phi_tb[s] @ W, atol=1e-10)
    assert np.allclose(W @ dil.T, T_tb, atol=1e-10)
    assert np.linalg.norm(dil.T, 2) == pytest.approx(1.0)


def test_dilation_qubit_rank_four():
    atoms = [np.diag([0.75, 0.25]), np.diag([0.25, 0.75])]
    phi = [np.zeros((2, 2)), atoms[0], atoms[1], atoms[0] + atoms[1]]
    om = OperatorMap.from_matrices(subset_semigroup(2), phi)
    assert np.linalg.matrix_rank(block_gram(om), tol=1e-10) == 4
    dil = build_dilation(om)
    assert dil.rank == 4
    rep = verify_dilation(dil, om)
    assert rep.passed and rep.isometry


def test_dilation_group_unitary():
    # Z2 acting by swap on C^2, compressed to itself: Phi should be unitary
    om = OperatorMap.from_matrices(cyclic_group(2), [np.eye(2), SWAP])
    dil = build_dilation(om)
    rep = verify_dilation(dil, om)
    assert rep.passed and dil.rank == 2
    assert np.allclose(dil.Phi[1] @ dil.Phi[1].conj().T, np.eye(2))


def test_swap_scaled_by_two_is_not_pd():
    om = OperatorMap.from_matrices(cyclic_group(2), [np.eye(2), 2 * SWAP])
    rep = check_positive_definite(om)
    assert not rep.positive_definite and rep.min_eigenvalue == pytest.approx(-1.0)


def test_shifted_gram_unit_equals_gram():
    om = coin_map()
    assert np.allclose(shifted_gram(om, om.sg.unit), block_gram(om))


def test_boundedness_coin():
    om = coin_map()
    dil = build_dilation(om)
    table = boundedness_table(dil, om)
    assert table[om.sg.unit] == pytest.approx(1.0, abs=1e-9)
    assert all(c <= 1 + 1e-9 for c in table)
    for u in range(4):
        assert np.linalg.norm(dil.Phi[u], 2) ** 2 <= table[u] * (1 + 1e-8) + 1e-12
    with pytest.raises(IndexOutOfRange):
        boundedness_constant(dil, om, 9)


def test_t_bound_when_phi_unit_not_identity():
    om = OperatorMap.from_matrices(TRIVIAL, [2 * np.eye(1)])
    dil = build_dilation(om)
    rep = verify_dilation(dil, om)
    assert rep.passed and not rep.isometry and "t_bound" in rep.checks


def test_intertwiner_between_seeded_builds():
    om = coin_map()
    a, b = build_dilation(om), build_dilation(om, seed=5)
    assert not np.allclose(a.Phi, b.Phi)
    W, rep = intertwiner(a, b)
    assert rep.passed and max(rep.unitarity, rep.phi_residual, rep.t_residual) <= 1e-10


def test_intertwiner_rank_mismatch():
    a = build_dilation(coin_map())
    b = build_dilation(OperatorMap.from_matrices(TRIVIAL, [np.eye(1)]))
    assert not intertwiner(a, b)[1].passed
