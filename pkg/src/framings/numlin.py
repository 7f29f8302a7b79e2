"""Dense complex linear algebra kernel.

All rank decisions go through singular values (or eigenvalues for Hermitian
input) compared against an effective threshold ``max(abs, rel * |M|_2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import InputError, NonHermitian, RangeViolation, ShapeError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "Subspace",
    "as_cmatrix",
    "as_cvector",
    "adjoint",
    "opnorm",
    "hermitian_part",
    "nullspace",
    "range_basis",
    "psd_check",
    "PSDResult",
    "max_generalized_eigenvalue",
    "pinv",
    "principal_angles",
    "same_subspace",
    "complex_gaussian",
]


@dataclass(frozen=True)
class Tolerance:
    """Relative threshold plus an absolute floor."""

    rel: float = 1e-9
    abs: float = 1e-12

    def __post_init__(self):
        if not (self.rel >= 0 and self.abs >= 0):
            raise InputError(f"tolerance must be nonnegative, got rel={self.rel}, abs={self.abs}")

    def scaled(self, scale: float) -> float:
        return max(self.abs, self.rel * float(scale))

    def threshold(self, M) -> float:
        """Effective threshold for ``M``: ``max(abs, rel * |M|_2)``."""
        return self.scaled(opnorm(M))

    def to_json(self) -> dict:
        return {"rel": self.rel, "abs": self.abs}


DEFAULT_TOL = Tolerance()


def as_cmatrix(M, name: str = "matrix") -> np.ndarray:
    a = np.asarray(M, dtype=complex)
    if a.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError(f"{name} has non-finite entries")
    return a


def as_cvector(v, name: str = "vector") -> np.ndarray:
    a = np.asarray(v, dtype=complex)
    if a.ndim != 1:
        raise ShapeError(f"{name} must be 1-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError(f"{name} has non-finite entries")
    return a


def adjoint(M) -> np.ndarray:
    return np.conj(np.asarray(M)).T


def opnorm(M) -> float:
    """Spectral norm; zero for empty matrices."""
    a = np.asarray(M)
    if a.size == 0:
        return 0.0
    if a.ndim == 1:
        return float(np.linalg.norm(a))
    return float(np.linalg.norm(a, 2))


def hermitian_part(G) -> np.ndarray:
    G = np.asarray(G)
    return (G + adjoint(G)) / 2


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of C^dim given by orthonormal columns.

    ``basis`` has shape ``(dim, k)``; ``k == 0`` is the zero subspace.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2:
            raise ShapeError(f"subspace basis must be 2-dimensional, got shape {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors, tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        """Orthonormalize the columns of ``vectors`` (rank-revealing)."""
        return range_basis(as_cmatrix(vectors), tol)

    @classmethod
    def full(cls, dim: int) -> "Subspace":
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def zero(cls, dim: int) -> "Subspace":
        return cls(np.zeros((dim, 0), dtype=complex))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ adjoint(self.basis)

    def distance(self, vectors) -> float:
        """Spectral norm of the part of ``vectors`` orthogonal to the subspace."""
        X = np.asarray(vectors, dtype=complex)
        if X.ndim == 1:
            X = X[:, None]
        R = X - self.basis @ (adjoint(self.basis) @ X)
        return opnorm(R)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, rank={self.rank})"


def nullspace(M, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Right singular vectors whose singular values fall below the threshold."""
    M = as_cmatrix(M)
    n = M.shape[1]
    if M.shape[0] == 0 or n == 0:
        return Subspace(np.eye(n, dtype=complex))
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    thr = tol.scaled(s[0])
    k = int(np.count_nonzero(s > thr))
    return Subspace(adjoint(Vh[k:]))


def range_basis(M, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Left singular vectors for singular values above the threshold."""
    M = as_cmatrix(M)
    m = M.shape[0]
    if M.size == 0:
        return Subspace.zero(m)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    thr = tol.scaled(s[0])
    k = int(np.count_nonzero(s > thr))
    return Subspace(U[:, :k])


class PSDResult(NamedTuple):
    is_psd: bool
    min_eigenvalue: float


def _checked_hermitian(G, tol: Tolerance) -> np.ndarray:
    G = as_cmatrix(G)
    if G.shape[0] != G.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {G.shape}")
    thr = tol.threshold(G)
    asym = opnorm(G - adjoint(G))
    if asym > thr:
        raise NonHermitian(asym, thr)
    return hermitian_part(G)


def psd_check(G, tol: Tolerance = DEFAULT_TOL) -> PSDResult:
    """Is ``G`` positive semidefinite up to the effective threshold?

    Raises ``NonHermitian`` when ``|G - G*|`` exceeds the threshold.
    """
    H = _checked_hermitian(G, tol)
    if H.shape[0] == 0:
        return PSDResult(True, 0.0)
    w = np.linalg.eigvalsh(H)
    thr = tol.scaled(np.max(np.abs(w)))
    return PSDResult(bool(w[0] >= -thr), float(w[0]))


def max_generalized_eigenvalue(Gu, G, tol: Tolerance = DEFAULT_TOL) -> float:
    """Smallest ``c`` with ``Gu <= c G`` as quadratic forms.

    Both arguments are Hermitian PSD.  The problem is reduced to an orthonormal
    basis of ``range(G)``; if ``Gu`` is not negligible on ``ker(G)`` no finite
    constant exists and ``RangeViolation`` is raised.
    """
    G = _checked_hermitian(G, tol)
    Gu = _checked_hermitian(Gu, tol)
    if G.shape != Gu.shape:
        raise ShapeError(f"shape mismatch: {Gu.shape} vs {G.shape}")
    if G.shape[0] == 0:
        return 0.0
    w, U = np.linalg.eigh(G)
    thr_g = tol.scaled(np.max(np.abs(w)))
    keep = w > thr_g
    N = U[:, ~keep]
    if N.shape[1]:
        leak = opnorm(adjoint(N) @ Gu @ N)
        thr = tol.scaled(max(opnorm(G), opnorm(Gu)))
        if leak > thr:
            raise RangeViolation(leak, thr)
    if not np.any(keep):
        return 0.0
    W = U[:, keep] / np.sqrt(w[keep])
    reduced = hermitian_part(adjoint(W) @ Gu @ W)
    return max(float(np.linalg.eigvalsh(reduced)[-1]), 0.0)


def pinv(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse; singular values below threshold count as zero."""
    M = as_cmatrix(M)
    if M.size == 0:
        return np.zeros((M.shape[1], M.shape[0]), dtype=complex)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    thr = tol.scaled(s[0])
    keep = s > thr
    return (adjoint(Vh[keep]) / s[keep]) @ adjoint(U[:, keep])


def principal_angles(X: Subspace, Y: Subspace) -> np.ndarray:
    """Principal angles in radians, sorted descending (empty if either is zero)."""
    if X.dim != Y.dim:
        raise ShapeError(f"ambient dimensions differ: {X.dim} vs {Y.dim}")
    if X.rank == 0 or Y.rank == 0:
        return np.zeros(0)
    return scipy.linalg.subspace_angles(X.basis, Y.basis)


def same_subspace(X: Subspace, Y: Subspace, angle_tol: float = 1e-9) -> bool:
    if X.dim != Y.dim or X.rank != Y.rank:
        return False
    angles = principal_angles(X, Y)
    return bool(angles.size == 0 or angles.max() < angle_tol)


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussian samples (unit variance per entry)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
