"""JSON codecs.  Complex scalars are ``[re, im]`` pairs everywhere."""
from __future__ import annotations

import dataclasses
import math
from typing import Any

import numpy as np

from .dilation import OperatorMap
from .errors import ShapeError
from .framing import Framing
from .naimark import POVM
from .numlin import Subspace, Tolerance, range_basis
from .semigroup import FiniteStarSemigroup

__all__ = [
    "encode",
    "cvec_from_json",
    "cmat_from_json",
    "framing_to_json",
    "framing_from_json",
    "subspace_to_json",
    "subspace_from_json",
    "semigroup_to_json",
    "semigroup_from_json",
    "operator_map_to_json",
    "operator_map_from_json",
    "povm_to_json",
    "povm_from_json",
]


def _num(x: float):
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def cvec_to_json(v) -> list:
    return [[_num(z.real), _num(z.imag)] for z in np.asarray(v, dtype=complex)]


def cmat_to_json(M) -> list:
    return [cvec_to_json(row) for row in np.asarray(M, dtype=complex)]


def cvec_from_json(data, where: str = "vector") -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ShapeError(f"{where}: not a list of [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ShapeError(f"{where}: expected a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def cmat_from_json(data, where: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ShapeError(f"{where}: rows must have equal length") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ShapeError(f"{where}: expected a list of rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def framing_to_json(fr: Framing) -> dict:
    return {"dim": fr.dim, "g": cmat_to_json(fr.g), "h": cmat_to_json(fr.h)}


def framing_from_json(data: dict, where: str = "framing") -> Framing:
    d = int(data["dim"])
    g = cmat_from_json(data["g"], f"{where}.g")
    h = cmat_from_json(data["h"], f"{where}.h")
    for name, arr in (("g", g), ("h", h)):
        if arr.shape[1] != d:
            raise ShapeError(f"{where}.{name}: vectors must have length dim={d}")
    if g.shape[0] != h.shape[0]:
        raise ShapeError(f"{where}: g and h must have the same length")
    return Framing(g, h)


def subspace_to_json(F: Subspace) -> dict:
    return {"dim": F.dim, "basis_columns": cmat_to_json(F.basis.T)}


def subspace_from_json(data: dict, where: str = "subspace",
                       tol: Tolerance | None = None) -> Subspace:
    """Columns are orthonormalized on load; dependent columns collapse."""
    d = int(data["dim"])
    cols = data["basis_columns"]
    if not cols:
        return Subspace.zero(d)
    B = cmat_from_json(cols, f"{where}.basis_columns").T
    if B.shape[0] != d:
        raise ShapeError(f"{where}.basis_columns: vectors must have length dim={d}")
    if np.allclose(B.conj().T @ B, np.eye(B.shape[1]), atol=1e-12):
        return Subspace(B)
    return range_basis(B, tol) if tol is not None else range_basis(B)


def semigroup_to_json(sg: FiniteStarSemigroup) -> dict:
    out = {"n": sg.n, "mul": sg.mul.tolist(), "star": sg.star.tolist(), "unit": sg.unit}
    if sg.labels is not None:
        out["labels"] = list(sg.labels)
    return out


def semigroup_from_json(data: dict, where: str = "semigroup") -> FiniteStarSemigroup:
    n = int(data["n"])
    mul = np.asarray(data["mul"])
    if mul.shape != (n, n):
        raise ShapeError(f"{where}.mul: expected an {n}x{n} table, got shape {mul.shape}")
    if len(data["star"]) != n:
        raise ShapeError(f"{where}.star: expected {n} entries")
    try:
        return FiniteStarSemigroup(mul, data["star"], data["unit"], data.get("labels"))
    except ShapeError as exc:
        raise ShapeError(f"{where}: {exc}") from exc


def operator_map_to_json(om: OperatorMap) -> dict:
    return {
        "semigroup": semigroup_to_json(om.sg),
        "dimF": om.dim_f,
        "dimE": om.dim_e,
        "phi": {str(a): cmat_to_json(om.phi[a]) for a in range(om.n)},
    }


def operator_map_from_json(data: dict, where: str = "payload") -> OperatorMap:
    sg = semigroup_from_json(data["semigroup"], f"{where}.semigroup")
    dim_f, dim_e = int(data["dimF"]), int(data["dimE"])
    mats = {}
    for key, mat in data["phi"].items():
        try:
            a = int(key)
        except ValueError:
            raise ShapeError(f"{where}.phi: key {key!r} is not an element index") from None
        if not 0 <= a < sg.n:
            raise ShapeError(f"{where}.phi: element {a} outside 0..{sg.n - 1}")
        M = cmat_from_json(mat, f"{where}.phi.{key}")
        if M.shape != (dim_e, dim_f):
            raise ShapeError(f"{where}.phi.{key}: expected shape {dim_e}x{dim_f}, got {M.shape}")
        mats[a] = M
    return OperatorMap.from_matrices(sg, mats)


def povm_to_json(p: POVM) -> dict:
    return {"dimE": p.dim_e, "atoms": [cmat_to_json(E) for E in p.atoms]}


def povm_from_json(data: dict, tol: Tolerance, where: str = "payload") -> POVM:
    d = int(data["dimE"])
    atoms = []
    for a, E in enumerate(data["atoms"]):
        M = cmat_from_json(E, f"{where}.atoms[{a}]")
        if M.shape != (d, d):
            raise ShapeError(f"{where}.atoms[{a}]: expected shape {d}x{d}, got {M.shape}")
        atoms.append(M)
    return POVM(np.stack(atoms), tol)


def encode(obj: Any) -> Any:
    """Turn report objects (dataclasses, numpy values, subspaces) into JSON data."""
    if isinstance(obj, Subspace):
        return subspace_to_json(obj)
    if isinstance(obj, Framing):
        return framing_to_json(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: encode(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_num(obj.real), _num(obj.imag)]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return cmat_to_json(obj) if obj.ndim == 2 else encode(obj.tolist())
        return encode(obj.tolist())
    return obj
