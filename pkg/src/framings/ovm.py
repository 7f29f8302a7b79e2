"""Operator valued measures built from framings.

``F(sigma) = sum_{i in sigma} h_i g_i^H``.  Matrices are total on C^d; the
domain restriction to F_max (or to a framing space F) lives in the checks.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .errors import AtomNotPSD, IndexOutOfRange
from .framing import Framing, GeneratorPair, compute_fmax, synthesis_operator
from .naimark import POVM
from .numlin import DEFAULT_TOL, Tolerance, adjoint, opnorm

__all__ = [
    "RankOne",
    "FramingOVM",
    "TotalReport",
    "TransformReport",
    "PovmConversion",
    "ovm_eval",
    "ovm_total_check",
    "ovm_transform_check",
    "framing_to_povm",
    "subset_family",
    "MAX_ENUMERATED_INDICES",
]

MAX_ENUMERATED_INDICES = 12


@dataclass(frozen=True, eq=False)
class RankOne:
    """``f -> <f, g> h``."""

    g: np.ndarray
    h: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.outer(self.h, np.conj(self.g))

    def __call__(self, f):
        return np.vdot(self.g, f) * self.h


@dataclass(frozen=True, eq=False)
class FramingOVM:
    fr: Framing

    @property
    def size(self) -> int:
        return self.fr.size

    def atom(self, i: int) -> RankOne:
        return RankOne(self.fr.g[i], self.fr.h[i])


def _indices(m: FramingOVM, sigma) -> list[int]:
    out = []
    for i in sigma:
        i = int(i)
        if not 0 <= i < m.size:
            raise IndexOutOfRange(f"index {i} outside 0..{m.size - 1}")
        out.append(i)
    return out


def ovm_eval(m: FramingOVM, sigma: Iterable[int]) -> np.ndarray:
    """Sum of the rank-one atoms indexed by ``sigma``, in the order given."""
    idx = _indices(m, sigma)
    d = m.fr.dim
    if not idx:
        return np.zeros((d, d), dtype=complex)
    return m.fr.h[idx].T @ np.conj(m.fr.g[idx])


@dataclass
class TotalReport:
    passed: bool
    residual: float
    threshold: float
    fmax_rank: int
    dim: int
    scope: str  # "full", "proper" or "none"


def ovm_total_check(m: FramingOVM, tol: Tolerance = DEFAULT_TOL) -> TotalReport:
    """Check ``F(all) f = f`` on F_max and say whether F_max is all of C^d."""
    fmax = compute_fmax(m.fr, tol)
    S = synthesis_operator(m.fr)
    Q = fmax.basis
    resid = opnorm(S @ Q - Q) if fmax.rank else 0.0
    thr = tol.scaled(max(1.0, opnorm(S)))
    if fmax.rank == 0:
        scope = "none"
    elif fmax.rank == m.fr.dim:
        scope = "full"
    else:
        scope = "proper"
    return TotalReport(bool(resid <= thr), resid, thr, fmax.rank, m.fr.dim, scope)


def subset_family(n: int, rng: np.random.Generator | None = None,
                  cap: int = MAX_ENUMERATED_INDICES) -> Iterator[tuple[int, ...]]:
    """All subsets of ``range(n)`` if ``n <= cap``, else ``2**cap`` random ones."""
    if n <= cap:
        for k in range(n + 1):
            yield from combinations(range(n), k)
        return
    rng = rng if rng is not None else np.random.default_rng(0)
    for _ in range(2**cap):
        yield tuple(np.flatnonzero(rng.random(n) < 0.5))


@dataclass
class TransformReport:
    passed: bool
    max_residual: float
    threshold: float
    subsets_checked: int
    exhaustive: bool
    seed: int
    diagonal_defect: float


def ovm_transform_check(
    m: FramingOVM, gp: GeneratorPair, tol: Tolerance = DEFAULT_TOL, seed: int = 0
) -> TransformReport:
    """Compare the measure of ``(A g_n, B h_n)`` with ``B F(sigma) A^*`` on ``F``.

    ``diagonal_defect`` is the largest off-diagonal mass of ``B F(sigma) A^*``
    over the checked subsets, exposed as data only.
    """
    A, B, Q = gp.A, gp.B, gp.F.basis
    new = FramingOVM(Framing(m.fr.g @ A.T, m.fr.h @ B.T))
    As = adjoint(A)
    thr = tol.scaled(max(1.0, opnorm(A) * opnorm(B) * _atom_mass(m)))
    worst = 0.0
    offdiag = 0.0
    count = 0
    rng = np.random.default_rng(seed)
    for sigma in subset_family(m.size, rng):
        transformed = B @ ovm_eval(m, sigma) @ As
        worst = max(worst, opnorm((ovm_eval(new, sigma) - transformed) @ Q))
        offdiag = max(offdiag, opnorm(transformed - np.diag(np.diag(transformed))))
        count += 1
    return TransformReport(
        passed=bool(worst <= thr),
        max_residual=worst,
        threshold=thr,
        subsets_checked=count,
        exhaustive=m.size <= MAX_ENUMERATED_INDICES,
        seed=seed,
        diagonal_defect=offdiag,
    )


def _atom_mass(m: FramingOVM) -> float:
    return float(np.sum(np.linalg.norm(m.fr.g, axis=1) * np.linalg.norm(m.fr.h, axis=1)))


@dataclass
class PovmConversion:
    accepted: bool
    reason: str
    failing_atom: int | None
    total_defect: float
    povm: POVM | None = None


def framing_to_povm(m: FramingOVM, tol: Tolerance = DEFAULT_TOL) -> PovmConversion:
    """Package the singleton values ``h_i g_i^H`` as POVM atoms when they are PSD.

    ``total_defect`` is ``|I - F(all)|``; it is reported, not judged.
    """
    d = m.fr.dim
    atoms = np.einsum("ni,nj->nij", m.fr.h, np.conj(m.fr.g))
    total = atoms.sum(axis=0)
    defect = opnorm(np.eye(d) - total)
    for i, E in enumerate(atoms):
        thr = tol.scaled(max(1.0, opnorm(E)))
        asym = opnorm(E - adjoint(E))
        if asym > thr:
            return PovmConversion(False, f"atom {i} is not Hermitian (|E - E*| = {asym:.3e})",
                                  i, defect)
        lo = float(np.linalg.eigvalsh((E + adjoint(E)) / 2)[0])
        if lo < -thr:
            return PovmConversion(False, f"atom {i} has negative eigenvalue {lo:.6g}", i, defect)
    asym = opnorm(total - adjoint(total))
    if asym > tol.scaled(max(1.0, opnorm(total))):
        return PovmConversion(False, "total is not Hermitian", None, defect)
    try:
        povm = POVM(atoms, tol)
    except AtomNotPSD as exc:
        return PovmConversion(False, str(exc), exc.index, defect)
    return PovmConversion(True, "ok", None, defect, povm)
