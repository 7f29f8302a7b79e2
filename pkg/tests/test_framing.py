import numpy as np
import pytest

from framings.demos import cumulative_sum, forward_difference, mercedes_vectors
from framings.errors import (
    Condition1Violation,
    Condition2Violation,
    DimensionMismatch,
    InputError,
    RescaleViolation,
    ShapeError,
    ZeroF,
)
from framings.framing import (
    Framing,
    check_generator_pair,
    compute_fmax,
    dual_framing,
    generate_framing,
    largest_generator_subspace,
    rescale,
    synthesis_operator,
    verify_reconstruction,
)
from framings.numlin import Subspace, same_subspace

from generators import fixed_space_oracle, framing_with_fmax, synthesis_by_loops


def mercedes():
    u = mercedes_vectors()
    return Framing(2 / 3 * u, u)


def test_framing_shape_errors():
    with pytest.raises(ShapeError):
        Framing(np.eye(2), np.eye(3))
    with pytest.raises(ShapeError):
        Framing(np.zeros((0, 2)), np.zeros((0, 2)))
    with pytest.raises(InputError):
        Framing(np.array([[np.nan]]), np.array([[1.0]]))


def test_synthesis_orthonormal_is_identity():
    assert np.allclose(synthesis_operator(Framing.orthonormal(3)), np.eye(3))


def test_synthesis_mercedes_by_direct_sum():
    fr = mercedes()
    angles = np.deg2rad([90, 210, 330])
    oracle = np.zeros((2, 2))
    for a in angles:
        u = np.array([np.cos(a), np.sin(a)])
        oracle += (2 / 3) * np.outer(u, u)
    assert np.allclose(oracle, np.eye(2), atol=1e-15)
    assert np.allclose(synthesis_operator(fr), oracle, atol=1e-14)


def test_fmax_examples():
    assert compute_fmax(Framing.orthonormal(2)).rank == 2
    e1, z = np.array([1.0, 0.0]), np.zeros(2)
    fr = Framing(np.array([e1, e1]), np.array([e1, z]))
    F = compute_fmax(fr)
    assert same_subspace(F, Subspace.span(e1[:, None]))


def test_fmax_can_be_zero():
    fr = Framing(np.array([[1.0, 0.0]]), np.array([[0.0, 1.0]]))
    assert compute_fmax(fr).rank == 0


def test_fmax_random_prescribed(rng):
    fr, Q = framing_with_fmax(rng, 5, 7, 3)
    F = compute_fmax(fr)
    assert same_subspace(F, Subspace(Q), 1e-8)
    assert same_subspace(F, Subspace(fixed_space_oracle(synthesis_by_loops(fr.g, fr.h))), 1e-8)


def test_reconstruction_orthonormal_and_mercedes():
    rep = verify_reconstruction(Framing.orthonormal(2), Subspace.full(2))
    assert rep.passed and rep.terminal_error <= 1e-12
    rep = verify_reconstruction(mercedes(), Subspace.full(2), trials=20)
    assert rep.passed and rep.samples == 22
    assert rep.max_partial_norm <= rep.partial_sum_bound + rep.threshold


def test_reconstruction_fails_outside_fmax():
    e1, z = np.array([1.0, 0.0]), np.zeros(2)
    fr = Framing(np.array([e1, e1]), np.array([e1, z]))
    assert not verify_reconstruction(fr, Subspace.full(2)).passed
    assert verify_reconstruction(fr, compute_fmax(fr)).passed


def test_reconstruction_errors():
    with pytest.raises(DimensionMismatch):
        verify_reconstruction(Framing.orthonormal(2), Subspace.full(3))
    with pytest.raises(InputError):
        verify_reconstruction(Framing.orthonormal(2), Subspace.full(2), trials=0)


def test_reconstruction_deterministic_in_seed():
    a = verify_reconstruction(mercedes(), Subspace.full(2), seed=3)
    b = verify_reconstruction(mercedes(), Subspace.full(2), seed=3)
    assert a == b


def test_rescale_orthonormal():
    fr = Framing.orthonormal(2)
    out = rescale(fr, [2, 2], [0.5, 0.5])
    assert np.allclose(out.g, 0.5 * np.eye(2)) and np.allclose(out.h, 2 * np.eye(2))
    assert compute_fmax(out).rank == 2


def test_rescale_mercedes_phases():
    fr = mercedes()
    ph = np.exp(1j * np.array([0.3, 1.1, 2.7]))
    out = rescale(fr, ph, ph)
    assert np.allclose(synthesis_by_loops(out.g, out.h), synthesis_operator(fr), atol=1e-14)


def test_rescale_violation_names_index():
    with pytest.raises(RescaleViolation) as exc:
        rescale(Framing.orthonormal(3), [1, 1, 2], [1, 1, 1])
    assert exc.value.index == 2
    with pytest.raises(ShapeError):
        rescale(Framing.orthonormal(3), [1, 1], [1, 1])


def test_generator_identity_pair():
    fr = Framing.orthonormal(2)
    gp = check_generator_pair(fr, np.eye(2), np.eye(2), Subspace.full(2))
    new, rep = generate_framing(gp, fr)
    assert rep.passed
    assert np.allclose(new.g, fr.g) and np.allclose(new.h, fr.h)
    dual, drep = dual_framing(gp, fr)
    assert drep.valid and np.allclose(dual.g, fr.g) and np.allclose(dual.h, fr.h)


def test_generator_condition1():
    fr = Framing.orthonormal(2)
    A = np.array([[1.0, 0.0], [0.0, 0.0]])
    gp = check_generator_pair(fr, A, np.eye(2), Subspace.span(np.eye(2)[:, :1]))
    assert gp.condition1_residual < 1e-15
    # B A* e2 = 0, not e2
    assert np.allclose(np.eye(2) @ A.conj().T @ np.array([0, 1.0]), 0)
    with pytest.raises(Condition1Violation):
        check_generator_pair(fr, A, np.eye(2), Subspace.full(2))


def test_generator_condition2_and_zero():
    e1, z = np.array([1.0, 0.0]), np.zeros(2)
    fr = Framing(np.array([e1, e1]), np.array([e1, z]))   # F_max = span{e1}
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(Condition2Violation):
        check_generator_pair(fr, swap, swap, Subspace.span(e1[:, None]))
    with pytest.raises(ZeroF):
        check_generator_pair(fr, np.eye(2), np.eye(2), Subspace.zero(2))
    with pytest.raises(ShapeError):
        check_generator_pair(fr, np.eye(3), np.eye(3), Subspace.full(2))
    with pytest.raises(DimensionMismatch):
        check_generator_pair(fr, np.eye(2), np.eye(2), Subspace.full(3))


def test_derivative_volterra():
    d = 8
    A, B = forward_difference(d), cumulative_sum(d)
    # oracle: B A* is lower-triangular ones times upper bidiagonal; compute entrywise
    BAs = np.zeros((d, d), complex)
    for k in range(d):
        for j in range(d):
            BAs[k, j] = sum(B[k, l] * np.conj(A[j, l]) for l in range(d))
    expected_fixed = np.eye(d)[:, : d - 1]
    assert np.allclose(BAs @ expected_fixed, expected_fixed)
    fr = Framing.orthonormal(d)
    F = largest_generator_subspace(fr, A, B)
    assert same_subspace(F, Subspace(expected_fixed), 1e-9)
    gp = check_generator_pair(fr, A, B, F)
    _, rep = generate_framing(gp, fr)
    assert rep.passed


def test_dual_framing_subspace():
    fr = Framing.orthonormal(2)
    A = np.array([[1.0, 0.0], [0.0, 0.0]])
    gp = check_generator_pair(fr, A, np.eye(2), Subspace.span(np.eye(2)[:, :1]))
    dual, rep = dual_framing(gp, fr)
    assert rep.valid and rep.f_rank == 1
    assert same_subspace(rep.subspace, Subspace.span(np.eye(2)[:, :1]))


def test_dual_framing_may_be_empty():
    e1 = np.array([[1.0, 0.0]])
    fr = Framing(e1, e1)                      # F_max = span{e1}
    A = np.array([[1.0, 0.0], [0.0, 0.0]])
    B = np.array([[1.0, 1.0], [1.0, 0.0]])
    F = largest_generator_subspace(fr, A, B)  # span{(1, 1)}
    assert same_subspace(F, Subspace.span(np.array([[1.0], [1.0]])))
    gp = check_generator_pair(fr, A, B, F)
    assert generate_framing(gp, fr)[1].passed
    # A B* fixes only e1, and B* e1 = (1, 1) leaves F_max
    dual, rep = dual_framing(gp, fr)
    assert dual is None and not rep.valid and rep.f_rank == 0


def test_largest_generator_subspace_zero():
    fr = Framing.orthonormal(2)
    assert largest_generator_subspace(fr, np.eye(2), 2 * np.eye(2)).rank == 0
