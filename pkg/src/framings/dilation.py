"""Dilation of a map ``phi: S -> L(F, E)`` on a finite *-semigroup.

The orbit space ``D`` is spanned by the functions ``phi_{s,f}(t) = phi(ts) f``.
With ``F`` spanned by the first ``dim_f`` coordinates of ``E`` we use the
coordinates ``x[(s, i)]`` for ``sum x[(s, i)] phi_{s, e_i}`` (flattened as
``s * dim_f + i``) and the Gram matrix

    gram[(t, j), (s, i)] = <phi(t* s) e_i, e_j>_E

so that ``<x, y>_D = y^H gram x``.  Block ``(t, s)`` of ``gram`` is the top
``dim_f`` rows of ``phi(t* s)``.

For positive definite ``phi`` the quotient of ``D`` by the Gram null space
is realized as C^r through ``P = Z diag(sqrt(lam)) U^H`` built from the
positive part of ``gram = U diag(lam) U^H`` (``Z`` is the identity unless a
random rotation is requested).  Then ``Phi(u) = P L_u P^+``,
``T = P[:, (unit, .)]`` and ``S = M P^+`` with ``M[:, (s, i)] = phi(s) e_i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import (
    IndexOutOfRange,
    NonHermitian,
    NotPositiveDefinite,
    PostconditionFailed,
    QuotientLeak,
    RangeViolation,
    ShapeError,
)
from .numlin import (
    DEFAULT_TOL,
    Tolerance,
    adjoint,
    as_cmatrix,
    complex_gaussian,
    hermitian_part,
    max_generalized_eigenvalue,
    opnorm,
    psd_check,
    range_basis,
)
from .semigroup import FiniteStarSemigroup

__all__ = [
    "OperatorMap",
    "OrbitVector",
    "Dilation",
    "Check",
    "PDReport",
    "DilationReport",
    "orbit_eval",
    "block_gram",
    "shifted_gram",
    "check_positive_definite",
    "build_dilation",
    "verify_dilation",
    "boundedness_constant",
    "boundedness_table",
    "intertwiner",
]


@dataclass(frozen=True, eq=False)
class OperatorMap:
    """One ``dim_e x dim_f`` matrix per semigroup element."""

    sg: FiniteStarSemigroup
    phi: np.ndarray

    def __post_init__(self):
        phi = np.array(self.phi, dtype=complex)
        if phi.ndim != 3 or phi.shape[0] != self.sg.n:
            raise ShapeError(
                f"phi must have shape ({self.sg.n}, dim_e, dim_f), got {phi.shape}"
            )
        if phi.shape[1] == 0 or phi.shape[2] == 0:
            raise ShapeError("dim_e and dim_f must be positive")
        if not np.all(np.isfinite(phi)):
            raise ShapeError("phi has non-finite entries")
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_matrices(cls, sg: FiniteStarSemigroup, mats) -> "OperatorMap":
        if isinstance(mats, Mapping):
            missing = [a for a in range(sg.n) if a not in mats]
            if missing:
                raise ShapeError(f"no matrix for elements {missing}")
            mats = [mats[a] for a in range(sg.n)]
        mats = [as_cmatrix(m, f"phi[{a}]") for a, m in enumerate(mats)]
        shapes = {m.shape for m in mats}
        if len(shapes) != 1:
            raise ShapeError(f"phi matrices have differing shapes {sorted(shapes)}")
        return cls(sg, np.stack(mats))

    @property
    def dim_e(self) -> int:
        return self.phi.shape[1]

    @property
    def dim_f(self) -> int:
        return self.phi.shape[2]

    @property
    def n(self) -> int:
        return self.sg.n


def _element(om: OperatorMap, a) -> int:
    a = int(a)
    if not 0 <= a < om.n:
        raise IndexOutOfRange(f"element {a} outside 0..{om.n - 1}")
    return a


def orbit_eval(om: OperatorMap, s: int, f, t: int) -> np.ndarray:
    """``phi_{s,f}(t) = phi(ts) f``."""
    s, t = _element(om, s), _element(om, t)
    f = np.asarray(f, dtype=complex)
    if f.shape != (om.dim_f,):
        raise ShapeError(f"f must have length {om.dim_f}")
    return om.phi[om.sg.mul[t, s]] @ f


@dataclass
class OrbitVector:
    """A finite combination ``sum xi[(s, i)] phi_{s, e_i}`` of orbit functions."""

    coeffs: dict[tuple[int, int], complex] = field(default_factory=dict)

    def coordinates(self, om: OperatorMap) -> np.ndarray:
        x = np.zeros(om.n * om.dim_f, dtype=complex)
        for (s, i), c in self.coeffs.items():
            s = _element(om, s)
            if not 0 <= i < om.dim_f:
                raise IndexOutOfRange(f"F-basis index {i} outside 0..{om.dim_f - 1}")
            x[s * om.dim_f + i] += c
        return x

    def __call__(self, om: OperatorMap, t: int) -> np.ndarray:
        """Value of the combination at ``t``, a vector in E."""
        out = np.zeros(om.dim_e, dtype=complex)
        for (s, i), c in self.coeffs.items():
            out += c * orbit_eval(om, s, np.eye(om.dim_f)[i], t)
        return out


def _gram_from_words(om: OperatorMap, words: np.ndarray) -> np.ndarray:
    n, k = om.n, om.dim_f
    blocks = om.phi[words][:, :, :k, :]          # [t, s, j, i]
    return blocks.transpose(0, 2, 1, 3).reshape(n * k, n * k)


def block_gram(om: OperatorMap) -> np.ndarray:
    """``gram[(t, j), (s, i)] = <phi(t* s) e_i, e_j>``."""
    if om.dim_f > om.dim_e:
        raise ShapeError(f"F (dim {om.dim_f}) must be a subspace of E (dim {om.dim_e})")
    mul, star = om.sg.mul, om.sg.star
    return _gram_from_words(om, mul[star][:, :])


def shifted_gram(om: OperatorMap, u: int) -> np.ndarray:
    """``<phi(t* u* u s) e_i, e_j>``, the form of ``Phi(u)^* Phi(u)``."""
    u = _element(om, u)
    mul, star = om.sg.mul, om.sg.star
    left = mul[star][:, mul[star[u], mul[u]]]     # t* (u* (u s))
    return _gram_from_words(om, left)


@dataclass
class PDReport:
    positive_definite: bool
    min_eigenvalue: float
    hermitian_residual: float
    threshold: float
    gram_size: int


def check_positive_definite(om: OperatorMap, tol: Tolerance = DEFAULT_TOL) -> PDReport:
    """Positive definiteness of ``phi`` tested on the block Gram matrix.

    Sesquilinearity reduces the condition to basis vectors of ``F``, so the
    Gram matrix being PSD is equivalent to it.
    """
    G = block_gram(om)
    thr = tol.threshold(G)
    herm = opnorm(G - adjoint(G))
    try:
        ok, lo = psd_check(G, tol)
    except NonHermitian:
        lo = float(np.linalg.eigvalsh(hermitian_part(G))[0])
        return PDReport(False, lo, herm, thr, G.shape[0])
    return PDReport(ok, lo, herm, thr, G.shape[0])


@dataclass(frozen=True, eq=False)
class Dilation:
    """Quotient realization of the orbit space and the operators on it."""

    gram: np.ndarray
    rank: int
    embed: np.ndarray        # P, r x (n dim_f)
    embed_pinv: np.ndarray   # P^+, (n dim_f) x r
    Phi: np.ndarray          # (n, r, r)
    T: np.ndarray            # r x dim_f
    Sop: np.ndarray          # dim_e x r
    tol: Tolerance
    eigenvalues: np.ndarray
    phi_leak: float
    s_leak: float


def _shift_index(om: OperatorMap, u: int) -> np.ndarray:
    k = om.dim_f
    return (om.sg.mul[u][:, None] * k + np.arange(k)[None, :]).ravel()


def _shift_norm(om: OperatorMap, u: int) -> float:
    return float(np.sqrt(np.bincount(om.sg.mul[u]).max()))


def build_dilation(
    om: OperatorMap, tol: Tolerance = DEFAULT_TOL, seed: int | None = None
) -> Dilation:
    """Construct ``(Phi, S, T)`` with ``phi(u) = S Phi(u) T``.

    ``seed`` applies a random unitary to the quotient coordinates, giving a
    different but unitarily equivalent realization.

    Raises ``NotPositiveDefinite`` if the Gram matrix is not PSD and
    ``QuotientLeak`` if the shift or evaluation maps fail to respect the null
    space numerically.
    """
    pd = check_positive_definite(om, tol)
    if not pd.positive_definite:
        raise NotPositiveDefinite(pd.min_eigenvalue, pd.threshold)
    G = block_gram(om)
    lam, U = np.linalg.eigh(hermitian_part(G))
    cut = tol.scaled(np.max(np.abs(lam)) if lam.size else 0.0)
    keep = lam > cut
    lam_k, U_k = lam[keep], U[:, keep]
    r = int(keep.sum())
    root = np.sqrt(lam_k)
    P = root[:, None] * adjoint(U_k)
    P_plus = U_k / root[None, :]
    if seed is not None:
        Z = _random_unitary(np.random.default_rng(seed), r)
        P = Z @ P
        P_plus = P_plus @ adjoint(Z)

    n, k = om.n, om.dim_f
    Phi = np.empty((n, r, r), dtype=complex)
    p_norm = opnorm(P)
    phi_leak = 0.0
    for u in range(n):
        PL = P[:, _shift_index(om, u)]
        Phi[u] = PL @ P_plus
        leak = opnorm(Phi[u] @ P - PL)
        thr = tol.scaled(max(1.0, p_norm * _shift_norm(om, u)))
        if leak > thr:
            raise QuotientLeak(f"Phi({om.sg.label(u)})", leak, thr)
        phi_leak = max(phi_leak, leak)

    M = om.phi.transpose(1, 0, 2).reshape(om.dim_e, n * k)
    Sop = M @ P_plus
    s_leak = opnorm(Sop @ P - M)
    thr = tol.scaled(max(1.0, opnorm(M)))
    if s_leak > thr:
        raise QuotientLeak("S", s_leak, thr)

    u0 = om.sg.unit
    T = P[:, u0 * k:(u0 + 1) * k]
    for a in (G, P, P_plus, Phi, T, Sop, lam):
        a.setflags(write=False)
    return Dilation(G, r, P, P_plus, Phi, T, Sop, tol, lam, phi_leak, s_leak)


def _random_unitary(rng: np.random.Generator, r: int) -> np.ndarray:
    if r == 0:
        return np.zeros((0, 0), dtype=complex)
    Q, R = np.linalg.qr(complex_gaussian(rng, (r, r)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))[None, :]


@dataclass
class Check:
    residual: float
    threshold: float
    passed: bool

    @classmethod
    def of(cls, residual: float, threshold: float) -> "Check":
        return cls(float(residual), float(threshold), bool(residual <= threshold))


@dataclass
class DilationReport:
    passed: bool
    rank: int
    checks: dict[str, Check]
    isometry: bool
    minimality_rank: int
    minimality_sigma_min: float


def verify_dilation(
    dil: Dilation, om: OperatorMap, tol: Tolerance = DEFAULT_TOL
) -> DilationReport:
    """Check every identity the construction promises, each with its residual.

    ``homomorphism`` and ``unit``: ``Phi(uv) = Phi(u) Phi(v)``, ``Phi(1) = I``;
    ``dilation_formula``: ``S Phi(u) T = phi(u)``; ``minimality``: the vectors
    ``Phi(u) T e_i`` span the quotient; ``star``: ``Phi(u*) = Phi(u)^*``;
    ``adjointness``: the F-part of ``S`` equals ``T^*``; ``isometry`` or
    ``t_bound``: ``T^* T = I`` when ``phi(1)`` compresses to the identity on F,
    otherwise ``|T|^2 <= c`` with ``c`` the top of ``phi(1)`` on F.
    """
    sg, n, k, r = om.sg, om.n, om.dim_f, dil.rank
    Phi, T, Sop = dil.Phi, dil.T, dil.Sop
    phi_norm = max(1.0, max(opnorm(m) for m in Phi)) if r else 1.0
    checks: dict[str, Check] = {}

    prods = np.einsum("uab,vbc->uvac", Phi, Phi)
    hom = opnorm_max(Phi[sg.mul] - prods)
    checks["homomorphism"] = Check.of(hom, tol.scaled(phi_norm**2))
    checks["unit"] = Check.of(opnorm(Phi[sg.unit] - np.eye(r)), tol.scaled(phi_norm))

    formula = opnorm_max(np.einsum("ea,uab,bf->uef", Sop, Phi, T) - om.phi)
    scale = max(1.0, opnorm(Sop) * phi_norm * opnorm(T), max(opnorm(m) for m in om.phi))
    checks["dilation_formula"] = Check.of(formula, tol.scaled(scale))

    orbit = np.concatenate([Phi[u] @ T for u in range(n)], axis=1)
    if r:
        sv = np.linalg.svd(orbit, compute_uv=False)
        span_rank = range_basis(orbit, tol).rank
        sigma_min = float(sv[r - 1]) if sv.size >= r else 0.0
    else:
        span_rank, sigma_min = 0, 0.0
    checks["minimality"] = Check.of(float(r - span_rank), 0.0)

    star = opnorm_max(Phi[sg.star] - np.conj(np.transpose(Phi, (0, 2, 1))))
    checks["star"] = Check.of(star, tol.scaled(phi_norm))

    adj = opnorm(Sop[:k] - adjoint(T))
    checks["adjointness"] = Check.of(adj, tol.scaled(max(1.0, opnorm(T))))

    C = om.phi[sg.unit][:k, :]
    isometry = opnorm(C - np.eye(k)) <= tol.scaled(max(1.0, opnorm(C)))
    if isometry:
        checks["isometry"] = Check.of(opnorm(adjoint(T) @ T - np.eye(k)), tol.scaled(1.0))
    else:
        c = float(np.linalg.eigvalsh(hermitian_part(C))[-1])
        excess = max(0.0, opnorm(T) ** 2 - c)
        checks["t_bound"] = Check.of(excess, tol.scaled(max(1.0, abs(c))))

    return DilationReport(
        passed=all(c.passed for c in checks.values()),
        rank=r,
        checks=checks,
        isometry=bool(isometry),
        minimality_rank=span_rank,
        minimality_sigma_min=sigma_min,
    )


def opnorm_max(stack: np.ndarray) -> float:
    """Largest spectral norm over the leading axes of a stack of matrices."""
    if stack.size == 0:
        return 0.0
    mats = stack.reshape(-1, *stack.shape[-2:])
    return float(np.linalg.norm(mats, 2, axis=(1, 2)).max())


def boundedness_constant(
    dil: Dilation, om: OperatorMap, u: int, tol: Tolerance = DEFAULT_TOL
) -> float:
    """Best constant ``c(u)`` with ``Gu <= c(u) G`` (the Sz.-Nagy condition).

    Raises ``RangeViolation`` when no such constant exists, and
    ``PostconditionFailed`` if ``|Phi(u)|^2`` exceeds the computed constant.
    """
    u = _element(om, u)
    c = max_generalized_eigenvalue(shifted_gram(om, u), dil.gram, tol)
    norm2 = opnorm(dil.Phi[u]) ** 2
    if norm2 > c + tol.scaled(max(1.0, c)):
        raise PostconditionFailed(
            f"|Phi({om.sg.label(u)})|^2 = {norm2:.12g} exceeds c = {c:.12g}"
        )
    return c


def boundedness_table(
    dil: Dilation, om: OperatorMap, tol: Tolerance = DEFAULT_TOL
) -> list[float | None]:
    """``c(u)`` for every element; ``None`` where the range condition fails."""
    out: list[float | None] = []
    for u in range(om.n):
        try:
            out.append(boundedness_constant(dil, om, u, tol))
        except RangeViolation:
            out.append(None)
    return out


@dataclass
class IntertwinerReport:
    passed: bool
    unitarity: float
    phi_residual: float
    t_residual: float
    threshold: float


def intertwiner(
    a: Dilation, b: Dilation, tol: Tolerance = DEFAULT_TOL
) -> tuple[np.ndarray, IntertwinerReport]:
    """The unitary ``W`` with ``W Phi_a(u) = Phi_b(u) W`` and ``W T_a = T_b``.

    Both dilations must come from the same map.  ``W`` is read off from the
    two embeddings of the orbit space: ``W = P_b P_a^+``.
    """
    if a.rank != b.rank or a.embed.shape != b.embed.shape:
        thr = tol.scaled(1.0)
        return np.zeros((b.rank, a.rank), dtype=complex), IntertwinerReport(
            False, np.inf, np.inf, np.inf, thr
        )
    W = b.embed @ a.embed_pinv
    r = a.rank
    unit = max(opnorm(adjoint(W) @ W - np.eye(r)), opnorm(W @ adjoint(W) - np.eye(r)))
    phi_res = opnorm_max(np.einsum("ab,ubc->uac", W, a.Phi) - np.einsum("uab,bc->uac", b.Phi, W))
    t_res = opnorm(W @ a.T - b.T)
    scale = max(1.0, max((opnorm(m) for m in a.Phi), default=1.0), opnorm(a.T))
    thr = tol.scaled(scale)
    ok = unit <= thr and phi_res <= thr and t_res <= thr
    return W, IntertwinerReport(bool(ok), unit, phi_res, t_res, thr)
