"""Framings ``(g_n, h_n)`` and the reconstruction ``f = sum_n <f, g_n> h_n``.

A framing in C^d is stored as two ``(N, d)`` arrays whose rows are the
vectors ``g_n`` and ``h_n``.  The inner product is linear in the first slot,
``<f, g> = g^H f``, so the synthesis matrix is ``sum_n h_n g_n^H``.

Operators ``A``, ``B`` generate new framings ``(A g_n, B h_n)`` from an old
one, valid on any ``F`` where ``B A^*`` is the identity and ``A^* F`` stays
inside the maximal framing space of the original.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    Condition1Violation,
    Condition2Violation,
    DimensionMismatch,
    InputError,
    RescaleViolation,
    ShapeError,
    ZeroF,
)
from .numlin import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    adjoint,
    as_cmatrix,
    as_cvector,
    complex_gaussian,
    nullspace,
    opnorm,
)

__all__ = [
    "Framing",
    "GeneratorPair",
    "ReconstructionReport",
    "GenerationReport",
    "DualReport",
    "synthesis_operator",
    "compute_fmax",
    "verify_reconstruction",
    "rescale",
    "check_generator_pair",
    "largest_generator_subspace",
    "generate_framing",
    "dual_framing",
]


@dataclass(frozen=True, eq=False)
class Framing:
    """Pair of equal-length sequences ``g``, ``h`` in C^dim (rows are vectors)."""

    g: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        g = as_cmatrix(self.g, "g")
        h = as_cmatrix(self.h, "h")
        if g.shape != h.shape:
            raise ShapeError(f"g and h must have the same shape, got {g.shape} and {h.shape}")
        if g.shape[0] < 1:
            raise ShapeError("a framing needs at least one pair of vectors")
        if g.shape[1] < 1:
            raise ShapeError("ambient dimension must be positive")
        g.setflags(write=False)
        h.setflags(write=False)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "h", h)

    @classmethod
    def orthonormal(cls, dim: int) -> "Framing":
        e = np.eye(dim, dtype=complex)
        return cls(e, e)

    @property
    def dim(self) -> int:
        return self.g.shape[1]

    @property
    def size(self) -> int:
        return self.g.shape[0]

    def __len__(self):
        return self.size

    def permuted(self, perm) -> "Framing":
        perm = np.asarray(perm, dtype=int)
        return Framing(self.g[perm], self.h[perm])

    def coefficients(self, f) -> np.ndarray:
        """The analysis coefficients ``<f, g_n>``."""
        return np.conj(self.g) @ f

    def __repr__(self):
        return f"Framing(dim={self.dim}, size={self.size})"


def synthesis_operator(fr: Framing) -> np.ndarray:
    """``S = sum_n h_n g_n^H``; the fixed points of ``S`` are exactly F_max."""
    return fr.h.T @ np.conj(fr.g)


def compute_fmax(fr: Framing, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Maximal framing space, computed as ``ker(S - I)``."""
    S = synthesis_operator(fr)
    return nullspace(S - np.eye(fr.dim), tol)


def _scale(fr: Framing) -> float:
    # sum |g_n| |h_n| bounds every partial sum for |f| = 1
    return float(np.sum(np.linalg.norm(fr.g, axis=1) * np.linalg.norm(fr.h, axis=1)))


@dataclass
class ReconstructionReport:
    passed: bool
    terminal_error: float
    max_partial_norm: float
    partial_sum_bound: float
    threshold: float
    samples: int
    trials: int
    seed: int


def verify_reconstruction(
    fr: Framing,
    F: Subspace,
    trials: int = 20,
    tol: Tolerance = DEFAULT_TOL,
    seed: int = 0,
) -> ReconstructionReport:
    """Check the framing formula on ``F`` under random rearrangements.

    Each trial draws a unit vector ``f`` in ``F`` and a random permutation of
    the index set, then tracks every partial sum of the rearranged series and
    of a random subseries.  The basis vectors of ``F`` are also checked in the
    natural order.  The terminal error is the worst ``|sum - f|`` seen.
    """
    if trials < 1:
        raise InputError("trials must be at least 1")
    if F.dim != fr.dim:
        raise DimensionMismatch(f"subspace lives in C^{F.dim}, framing in C^{fr.dim}")
    rng = np.random.default_rng(seed)
    scale = _scale(fr)
    thr = tol.scaled(max(1.0, scale))
    bound = scale
    if F.rank == 0:
        return ReconstructionReport(True, 0.0, 0.0, bound, thr, 0, trials, seed)

    worst_err = 0.0
    worst_partial = 0.0
    samples = 0

    def run(f, order, mask):
        nonlocal worst_err, worst_partial, samples
        terms = fr.coefficients(f)[:, None] * fr.h
        partial = np.cumsum(terms[order], axis=0)
        sub = np.cumsum(terms[order][mask[order]], axis=0)
        worst_err = max(worst_err, float(np.linalg.norm(partial[-1] - f)))
        norms = np.linalg.norm(partial, axis=1)
        if sub.shape[0]:
            norms = np.concatenate([norms, np.linalg.norm(sub, axis=1)])
        worst_partial = max(worst_partial, float(norms.max()))
        samples += 1

    identity = np.arange(fr.size)
    everything = np.ones(fr.size, dtype=bool)
    for j in range(F.rank):
        run(F.basis[:, j], identity, everything)
    for _ in range(trials):
        f = F.basis @ complex_gaussian(rng, F.rank)
        f /= np.linalg.norm(f)
        run(f, rng.permutation(fr.size), rng.random(fr.size) < 0.5)

    passed = worst_err <= thr and worst_partial <= bound + thr
    return ReconstructionReport(
        bool(passed), worst_err, worst_partial, bound, thr, samples, trials, seed
    )


def rescale(fr: Framing, alpha, beta, tol: Tolerance = DEFAULT_TOL) -> Framing:
    """``(beta_n g_n, alpha_n h_n)``, which requires ``alpha_n conj(beta_n) = 1``."""
    alpha = as_cvector(alpha, "alpha")
    beta = as_cvector(beta, "beta")
    if alpha.shape[0] != fr.size or beta.shape[0] != fr.size:
        raise ShapeError(
            f"need {fr.size} scale factors, got {alpha.shape[0]} and {beta.shape[0]}"
        )
    prod = alpha * np.conj(beta)
    bad = np.flatnonzero(np.abs(prod - 1) > tol.scaled(1.0))
    if bad.size:
        raise RescaleViolation(bad[0], prod[bad[0]])
    return Framing(beta[:, None] * fr.g, alpha[:, None] * fr.h)


@dataclass(frozen=True, eq=False)
class GeneratorPair:
    """Operators ``A``, ``B`` with ``B A^* = I`` on ``F`` and ``A^* F`` inside F_max."""

    A: np.ndarray
    B: np.ndarray
    F: Subspace
    condition1_residual: float = 0.0
    condition2_distance: float = 0.0


def check_generator_pair(
    fr: Framing, A, B, F: Subspace, tol: Tolerance = DEFAULT_TOL
) -> GeneratorPair:
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    d = fr.dim
    if A.shape != (d, d) or B.shape != (d, d):
        raise ShapeError(f"A and B must be {d}x{d}, got {A.shape} and {B.shape}")
    if F.dim != d:
        raise DimensionMismatch(f"F lives in C^{F.dim}, framing in C^{d}")
    if F.rank == 0:
        raise ZeroF("F must be a nonzero subspace")

    Q = F.basis
    AsQ = adjoint(A) @ Q
    res1 = opnorm(B @ AsQ - Q)
    thr1 = tol.scaled(max(1.0, opnorm(A) * opnorm(B)))
    if res1 > thr1:
        raise Condition1Violation(res1, thr1)

    fmax = compute_fmax(fr, tol)
    dist2 = fmax.distance(AsQ)
    thr2 = tol.scaled(max(1.0, opnorm(A)))
    if dist2 > thr2:
        raise Condition2Violation(dist2, thr2)
    return GeneratorPair(A, B, F, res1, dist2)


def largest_generator_subspace(fr: Framing, A, B, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """The largest ``F`` for which ``(A, B)`` is a generator pair.

    That is ``{f : B A^* f = f and A^* f in F_max}``, possibly zero.
    """
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    d = fr.dim
    fmax = compute_fmax(fr, tol)
    As = adjoint(A)
    M = np.vstack([B @ As - np.eye(d), (np.eye(d) - fmax.projector) @ As])
    return nullspace(M, tol)


@dataclass
class GenerationReport:
    passed: bool
    containment_residual: float
    threshold: float
    f_rank: int
    new_fmax_rank: int
    b_norm: float
    reconstruction: ReconstructionReport


def generate_framing(
    gp: GeneratorPair,
    fr: Framing,
    tol: Tolerance = DEFAULT_TOL,
    trials: int = 20,
    seed: int = 0,
) -> tuple[Framing, GenerationReport]:
    """The framing ``(A g_n, B h_n)`` together with a check that it frames ``F``.

    In finite dimension ``B`` is bounded, so the generated series converges
    unconditionally and only the reconstruction itself needs checking.
    """
    new = Framing(fr.g @ gp.A.T, fr.h @ gp.B.T)
    S_new = synthesis_operator(new)
    Q = gp.F.basis
    resid = opnorm(S_new @ Q - Q)
    thr = tol.scaled(max(1.0, opnorm(S_new)))
    recon = verify_reconstruction(new, gp.F, trials=trials, tol=tol, seed=seed)
    report = GenerationReport(
        passed=bool(resid <= thr and recon.passed),
        containment_residual=resid,
        threshold=thr,
        f_rank=gp.F.rank,
        new_fmax_rank=compute_fmax(new, tol).rank,
        b_norm=opnorm(gp.B),
        reconstruction=recon,
    )
    return new, report


@dataclass
class DualReport:
    valid: bool
    reason: str
    f_rank: int
    generation: GenerationReport | None = None
    subspace: Subspace | None = None


def dual_framing(
    gp: GeneratorPair,
    fr: Framing,
    tol: Tolerance = DEFAULT_TOL,
    trials: int = 20,
    seed: int = 0,
) -> tuple[Framing | None, DualReport]:
    """Swap the roles of ``A`` and ``B``: the framing ``(B g_n, A h_n)``.

    Its framing space is the largest ``F'`` with ``A B^* = I`` on ``F'`` and
    ``B^* F'`` inside F_max; that may be zero, which is reported rather than
    raised.
    """
    Fd = largest_generator_subspace(fr, gp.B, gp.A, tol)
    if Fd.rank == 0:
        return None, DualReport(
            False, "no nonzero f with A B* f = f and B* f in F_max", 0, None, Fd
        )
    try:
        swapped = check_generator_pair(fr, gp.B, gp.A, Fd, tol)
    except (Condition1Violation, Condition2Violation) as exc:
        return None, DualReport(False, str(exc), Fd.rank, None, Fd)
    new, gen = generate_framing(swapped, fr, tol, trials=trials, seed=seed)
    reason = "ok" if gen.passed else "generated dual fails reconstruction on F'"
    return new, DualReport(gen.passed, reason, Fd.rank, gen, Fd)
