"""Naimark dilation of positive operator valued measures.

A POVM with atoms ``E_0..E_{m-1}`` becomes the map ``sigma -> sum_{a in sigma} E_a``
on the semigroup of subsets of ``{0..m-1}`` under intersection (bitmask
encoded, identity involution).  Such a map is automatically positive definite,
so the general dilation applies; its ``Phi(sigma)`` are commuting orthogonal
projections and ``phi(sigma) = V^* Phi(sigma) V`` with ``V = T``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dilation import (
    Check,
    Dilation,
    OperatorMap,
    boundedness_table,
    build_dilation,
    check_positive_definite,
    opnorm_max,
)
from .errors import AtomNotPSD, NotPositiveDefinite, PositivityBroken, ShapeError, TooManyAtoms
from .numlin import DEFAULT_TOL, Tolerance, adjoint, hermitian_part, opnorm
from .semigroup import MAX_ATOMS, subset_semigroup

__all__ = [
    "POVM",
    "PVMDilation",
    "NaimarkCertificate",
    "PVMReport",
    "povm_to_operator_map",
    "naimark_dilate",
    "verify_pvm",
    "HERMITIAN_ATOL",
]

HERMITIAN_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class POVM:
    """Hermitian PSD atoms of equal size; normalized when they sum to ``I``."""

    atoms: np.ndarray
    tol: Tolerance = DEFAULT_TOL

    def __post_init__(self):
        atoms = np.array(self.atoms, dtype=complex)
        if atoms.ndim != 3 or atoms.shape[1] != atoms.shape[2] or atoms.shape[1] == 0:
            raise ShapeError(f"atoms must have shape (m, d, d), got {atoms.shape}")
        if atoms.shape[0] == 0:
            raise ShapeError("a POVM needs at least one atom")
        if not np.all(np.isfinite(atoms)):
            raise ShapeError("atoms have non-finite entries")
        for a, E in enumerate(atoms):
            asym = opnorm(E - adjoint(E))
            if asym > HERMITIAN_ATOL * max(1.0, opnorm(E)):
                raise AtomNotPSD(a, f"|E - E*| = {asym:.3e}")
            lo = float(np.linalg.eigvalsh(hermitian_part(E))[0])
            if lo < -self.tol.scaled(opnorm(E)):
                raise AtomNotPSD(a, f"min eigenvalue {lo:.6g}")
        atoms = (atoms + np.conj(atoms.transpose(0, 2, 1))) / 2
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)

    @property
    def m(self) -> int:
        return self.atoms.shape[0]

    @property
    def dim_e(self) -> int:
        return self.atoms.shape[1]

    @property
    def total(self) -> np.ndarray:
        return self.atoms.sum(axis=0)

    @property
    def defect(self) -> np.ndarray:
        """``I - sum E_a``."""
        return np.eye(self.dim_e) - self.total

    @property
    def normalized(self) -> bool:
        return opnorm(self.defect) <= self.tol.scaled(1.0)


def _membership(m: int) -> np.ndarray:
    """``bits[sigma, a] = 1`` iff atom ``a`` belongs to the bitmask ``sigma``."""
    k = np.arange(1 << m)
    return ((k[:, None] >> np.arange(m)[None, :]) & 1).astype(float)


def povm_to_operator_map(p: POVM) -> OperatorMap:
    if p.m > MAX_ATOMS:
        raise TooManyAtoms(f"{p.m} atoms exceeds the cap of {MAX_ATOMS}")
    sg = subset_semigroup(p.m)
    phi = np.einsum("sa,aij->sij", _membership(p.m), p.atoms)
    return OperatorMap(sg, phi)


@dataclass
class NaimarkCertificate:
    passed: bool
    k_dim: int
    compression: Check
    v_bound: Check
    c_total: float
    v_norm: float
    normalized: bool
    isometry: Check | None
    projection: Check | None
    c_table: list
    defect_norm: float


@dataclass(frozen=True, eq=False)
class PVMDilation:
    povm: POVM
    om: OperatorMap
    dil: Dilation
    V: np.ndarray
    certificate: NaimarkCertificate

    @property
    def projections(self) -> np.ndarray:
        return self.dil.Phi

    def atom_projection(self, a: int) -> np.ndarray:
        return self.dil.Phi[1 << a]


def naimark_dilate(
    p: POVM, tol: Tolerance = DEFAULT_TOL, seed: int | None = None
) -> PVMDilation:
    """Minimal Naimark dilation of ``p``, certified.

    Raises ``PositivityBroken`` when the Gram matrix fails the PSD test.  In
    exact arithmetic that cannot happen for a POVM, so it signals badly
    conditioned input.
    """
    om = povm_to_operator_map(p)
    pd = check_positive_definite(om, tol)
    if not pd.positive_definite:
        raise PositivityBroken(
            f"POVM Gram matrix has eigenvalue {pd.min_eigenvalue:.6g} below "
            f"-{pd.threshold:.3e}; the input is too badly conditioned"
        )
    try:
        dil = build_dilation(om, tol, seed=seed)
    except NotPositiveDefinite as exc:  # pragma: no cover - guarded above
        raise PositivityBroken(str(exc)) from exc
    V = dil.T
    d = p.dim_e

    compressed = np.einsum("ai,uab,bj->uij", np.conj(V), dil.Phi, V)
    scale = max(1.0, opnorm(p.total))
    compression = Check.of(opnorm_max(compressed - om.phi), tol.scaled(scale))

    c_total = float(np.linalg.eigvalsh(hermitian_part(p.total))[-1])
    v_norm = opnorm(V)
    v_bound = Check.of(max(0.0, v_norm - np.sqrt(max(c_total, 0.0))), tol.scaled(1.0))

    isometry = projection = None
    if p.normalized:
        isometry = Check.of(opnorm(adjoint(V) @ V - np.eye(d)), tol.scaled(1.0))
        Pv = V @ adjoint(V)
        projection = Check.of(
            max(opnorm(Pv @ Pv - Pv), opnorm(Pv - adjoint(Pv))), tol.scaled(1.0)
        )

    c_table = boundedness_table(dil, om, tol)
    checks = [compression, v_bound] + [c for c in (isometry, projection) if c is not None]
    passed = all(c.passed for c in checks) and all(c is not None for c in c_table)
    cert = NaimarkCertificate(
        passed=bool(passed),
        k_dim=dil.rank,
        compression=compression,
        v_bound=v_bound,
        c_total=c_total,
        v_norm=v_norm,
        normalized=p.normalized,
        isometry=isometry,
        projection=projection,
        c_table=c_table,
        defect_norm=opnorm(p.defect),
    )
    return PVMDilation(p, om, dil, V, cert)


@dataclass
class PVMReport:
    passed: bool
    k_dim: int
    checks: dict[str, Check]
    atom_ranks: list[int]
    max_c: float | None


def verify_pvm(pd: PVMDilation, tol: Tolerance = DEFAULT_TOL) -> PVMReport:
    """Exhaustive projection-valued-measure checks over all subsets.

    Categories: idempotent, self_adjoint, commute, multiplicative (over
    intersections), additive (over disjoint unions), norm_bound
    (``|Phi(sigma)| <= 1``), compression (``V^* Phi V = phi``) and c_bound
    (every ``c(sigma) <= 1``).
    """
    Phi = pd.dil.Phi
    n, r = Phi.shape[0], pd.dil.rank
    mul = pd.om.sg.mul
    thr = tol.scaled(1.0)
    checks: dict[str, Check] = {}

    PhiH = np.conj(Phi.transpose(0, 2, 1))
    sq = Phi @ Phi
    checks["idempotent"] = Check.of(opnorm_max(sq - Phi), thr)
    checks["self_adjoint"] = Check.of(opnorm_max(Phi - PhiH), thr)

    comm = mult = add = 0.0
    for u in range(n):
        left = Phi[u][None] @ Phi
        right = Phi @ Phi[u][None]
        comm = max(comm, opnorm_max(left - right))
        mult = max(mult, opnorm_max(Phi[mul[u]] - left))
        disjoint = np.flatnonzero((np.arange(n) & u) == 0)
        add = max(add, opnorm_max(Phi[u | disjoint] - Phi[u][None] - Phi[disjoint]))
    checks["commute"] = Check.of(comm, thr)
    checks["multiplicative"] = Check.of(mult, thr)
    checks["additive"] = Check.of(add, thr)

    norms = np.linalg.norm(Phi, 2, axis=(1, 2)) if r else np.zeros(n)
    checks["norm_bound"] = Check.of(max(0.0, float(norms.max()) - 1.0), thr)

    V = pd.V
    compressed = np.einsum("ai,uab,bj->uij", np.conj(V), Phi, V)
    scale = max(1.0, opnorm(pd.povm.total))
    checks["compression"] = Check.of(opnorm_max(compressed - pd.om.phi), tol.scaled(scale))

    cs = pd.certificate.c_table
    known = [c for c in cs if c is not None]
    max_c = max(known) if known else None
    c_excess = np.inf if len(known) < len(cs) else max(0.0, (max_c or 0.0) - 1.0)
    checks["c_bound"] = Check.of(c_excess, thr)

    ranks = [int(round(np.trace(pd.atom_projection(a)).real)) for a in range(pd.povm.m)]
    return PVMReport(
        passed=all(c.passed for c in checks.values()),
        k_dim=r,
        checks=checks,
        atom_ranks=ranks,
        max_c=max_c,
    )
