from itertools import combinations

import numpy as np
import pytest

from framings.demos import mercedes_vectors
from framings.errors import IndexOutOfRange
from framings.framing import Framing, check_generator_pair
from framings.numlin import Subspace
from framings.ovm import (
    FramingOVM,
    framing_to_povm,
    ovm_eval,
    ovm_total_check,
    ovm_transform_check,
    subset_family,
)

from generators import cgauss, dual_frame_pair, synthesis_by_loops


def test_eval_singleton_and_empty():
    m = FramingOVM(Framing.orthonormal(2))
    assert np.allclose(ovm_eval(m, [0]), np.diag([1.0, 0.0]))
    assert np.allclose(ovm_eval(m, []), np.zeros((2, 2)))
    with pytest.raises(IndexOutOfRange):
        ovm_eval(m, [2])


def test_eval_rank_one_atom():
    fr = Framing(np.array([[1.0, 1j]]), np.array([[2.0, 0.0]]))
    m = FramingOVM(fr)
    f = np.array([0.5, 1.0])
    assert np.allclose(ovm_eval(m, [0]) @ f, m.atom(0)(f))
    assert np.allclose(m.atom(0).matrix(), ovm_eval(m, [0]))


def test_eval_mercedes_full_set():
    u = mercedes_vectors()
    fr = Framing(2 / 3 * u, u)
    assert np.allclose(ovm_eval(FramingOVM(fr), [0, 1, 2]), synthesis_by_loops(fr.g, fr.h))
    assert np.allclose(ovm_eval(FramingOVM(fr), [2, 0, 1]), np.eye(2))


def test_total_check_scopes():
    assert ovm_total_check(FramingOVM(Framing.orthonormal(2))).scope == "full"
    e1 = np.array([[1.0, 0.0]])
    rep = ovm_total_check(FramingOVM(Framing(e1, e1)))
    assert rep.passed and rep.scope == "proper" and rep.fmax_rank == 1
    rep = ovm_total_check(FramingOVM(Framing(e1, np.array([[0.0, 1.0]]))))
    assert rep.scope == "none"


def test_subset_family():
    assert len(list(subset_family(3))) == 8
    fam = list(subset_family(14, np.random.default_rng(0)))
    assert len(fam) == 4096 and all(max(s, default=0) < 14 for s in fam)


def test_transform_identity_pair():
    fr = Framing.orthonormal(2)
    gp = check_generator_pair(fr, np.eye(2), np.eye(2), Subspace.full(2))
    rep = ovm_transform_check(FramingOVM(fr), gp)
    assert rep.passed and rep.max_residual == 0.0 and rep.subsets_checked == 4


def test_transform_diagonal_by_hand():
    fr = Framing.orthonormal(2)
    A, B = np.diag([1.0, 2.0]), np.diag([1.0, 0.5])
    gp = check_generator_pair(fr, A, B, Subspace.full(2))
    e2e2 = np.diag([0.0, 1.0])
    lhs = np.outer(B @ fr.h[1], np.conj(A @ fr.g[1]))
    rhs = B @ e2e2 @ A.conj().T
    assert np.allclose(lhs, e2e2) and np.allclose(rhs, e2e2)
    assert ovm_transform_check(FramingOVM(fr), gp).passed


def test_transform_random_brute_force(rng):
    d, N = 4, 6
    fr = dual_frame_pair(rng, d, N)
    A = np.diag(cgauss(rng, d) + 2)
    B = np.linalg.inv(A.conj().T)
    gp = check_generator_pair(fr, A, B, Subspace.full(d))
    rep = ovm_transform_check(FramingOVM(fr), gp)
    assert rep.passed and rep.subsets_checked == 64 and rep.exhaustive
    worst = 0.0
    for k in range(N + 1):
        for sigma in combinations(range(N), k):
            lhs = sum((np.outer(B @ fr.h[i], np.conj(A @ fr.g[i])) for i in sigma),
                      np.zeros((d, d)))
            rhs = B @ sum((np.outer(fr.h[i], np.conj(fr.g[i])) for i in sigma),
                          np.zeros((d, d))) @ A.conj().T
            worst = max(worst, np.abs(lhs - rhs).max())
    assert worst < 1e-10


def test_framing_to_povm_orthonormal():
    conv = framing_to_povm(FramingOVM(Framing.orthonormal(2)))
    assert conv.accepted
    assert np.allclose(conv.povm.atoms, [np.diag([1.0, 0]), np.diag([0, 1.0])])


def test_framing_to_povm_rejects_non_hermitian():
    fr = Framing(np.array([[1.0, 0.0]]), np.array([[0.0, 1.0]]))
    conv = framing_to_povm(FramingOVM(fr))
    assert not conv.accepted and conv.failing_atom == 0


def test_framing_to_povm_rejects_negative():
    fr = Framing(np.array([[1.0, 0.0]]), np.array([[-1.0, 0.0]]))
    conv = framing_to_povm(FramingOVM(fr))
    assert not conv.accepted and "negative" in conv.reason


def test_framing_to_povm_mercedes_tight():
    v = np.sqrt(2 / 3) * mercedes_vectors()
    conv = framing_to_povm(FramingOVM(Framing(v, v)))
    assert conv.accepted and conv.total_defect < 1e-14
    oracle = sum((2 / 3) * np.outer(u, u) for u in mercedes_vectors().real)
    assert np.allclose(conv.povm.total, oracle) and np.allclose(oracle, np.eye(2))
